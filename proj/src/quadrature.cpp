#include "jumpdiff/quadrature.hpp"

#include "jumpdiff/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace jumpdiff {

namespace {

// Kronrod nodes (descending) and weights; the Gauss-10 rule uses the odd nodes.
constexpr std::array<double, 11> xgk = {
  0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
  0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
  0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
  0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
  0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
  0.0
};
constexpr std::array<double, 11> wgk = {
  0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
  0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
  0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
  0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
  0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
  0.149445554002916905664936468389821
};
constexpr std::array<double, 5> wg = {
  0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
  0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
  0.295524224714752870173892994651338
};

struct Piece
{
  int segment;
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

// One QK21 panel with the QUADPACK error heuristic.
void qk21(const Integrand& f, Piece& p)
{
  const double centr = 0.5 * (p.a + p.b);
  const double hlgth = 0.5 * (p.b - p.a);
  const double dhlgth = std::abs(hlgth);

  double fv1[10], fv2[10];
  const double fc = f(centr);
  double resg = 0.0;
  double resk = wgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 10; ++j) {
    const double dx = hlgth * xgk[j];
    const double f1 = f(centr - dx);
    const double f2 = f(centr + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1)
      resg += wg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = wgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(eps * 50.0 * resabs, err);
  p.value = result;
  p.error = err;
}

QuadratureResult adapt(const std::vector<Integrand>& segs,
                       const std::vector<std::pair<double, double>>& ranges,
                       const QuadratureSettings& s)
{
  std::priority_queue<Piece> heap;
  std::vector<Piece> frozen;
  double total = 0.0, total_err = 0.0;
  std::size_t evals = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    Piece p{ static_cast<int>(i), ranges[i].first, ranges[i].second, 0, 0 };
    if (p.a == p.b)
      continue;
    qk21(segs[i], p);
    evals += 21;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  std::size_t intervals = heap.size();
  while (!heap.empty()) {
    if (total_err <= std::max(s.abs_tol, s.rel_tol * std::abs(total)))
      break;
    if (intervals >= s.max_intervals)
      break;
    Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    const double width = std::abs(p.b - p.a);
    const double scale = std::max(std::abs(p.a), std::abs(p.b));
    if (width <= 1e3 * std::numeric_limits<double>::epsilon() * scale ||
        !(mid != p.a && mid != p.b)) {
      frozen.push_back(p);
      continue;
    }
    Piece l{ p.segment, p.a, mid, 0, 0 };
    Piece r{ p.segment, mid, p.b, 0, 0 };
    qk21(segs[p.segment], l);
    qk21(segs[p.segment], r);
    evals += 42;
    ++intervals;
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }

  // Re-sum to shed accumulated cancellation in the running totals.
  double value = 0.0, error = 0.0;
  for (const auto& p : frozen) {
    value += p.value;
    error += p.error;
  }
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(value) || !std::isfinite(error))
    throw QuadratureError("non-finite integrand", value, error);
  if (error > std::max(s.abs_tol, s.rel_tol * std::abs(value)))
    throw QuadratureError("quadrature tolerance not met", value, error);
  return { value, error, evals };
}

} // namespace

QuadratureResult integrate(const Integrand& f,
                           const std::vector<double>& points,
                           const QuadratureSettings& settings)
{
  if (points.size() < 2)
    throw DomainError("integrate: need at least two points");
  std::vector<Integrand> segs;
  std::vector<std::pair<double, double>> ranges;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] <= points[i + 1]))
      throw DomainError("integrate: points must be nondecreasing");
    segs.push_back(f);
    ranges.emplace_back(points[i], points[i + 1]);
  }
  return adapt(segs, ranges, settings);
}

QuadratureResult integrate_half_line(const Integrand& g,
                                     double lower,
                                     std::vector<double> breaks,
                                     double beta0,
                                     double beta_tail,
                                     const QuadratureSettings& settings)
{
  if (!(lower >= 0.0) || !std::isfinite(lower))
    throw DomainError("integrate_half_line: lower bound must be finite and >= 0");
  if (!(beta_tail > 0.0))
    throw DomainError("integrate_half_line: tail exponent must be positive");
  std::erase_if(breaks, [&](double b) { return !(b > lower) || !std::isfinite(b); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.empty())
    breaks.push_back(std::max(1.0, 2.0 * lower));

  std::vector<Integrand> segs;
  std::vector<std::pair<double, double>> ranges;

  const double b0 = breaks.front();
  if (lower == 0.0) {
    const double k = std::max(1.0, std::ceil(2.0 / std::max(beta0 + 1.0, 1e-3)));
    segs.push_back([g, b0, k](double t) {
      const double z = b0 * std::pow(t, k);
      if (z < 1e-290)
        return 0.0;
      return g(z) * b0 * k * std::pow(t, k - 1.0);
    });
    ranges.emplace_back(0.0, 1.0);
  } else {
    segs.push_back(g);
    ranges.emplace_back(lower, b0);
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    segs.push_back(g);
    ranges.emplace_back(breaks[i], breaks[i + 1]);
  }
  const double bt = breaks.back();
  const double kt = std::max(1.0, std::ceil(2.0 / beta_tail));
  segs.push_back([g, bt, kt](double t) {
    const double z = bt * std::pow(t, -kt);
    if (!std::isfinite(z))
      return 0.0;
    const double v = g(z) * kt * bt * std::pow(t, -kt - 1.0);
    return std::isfinite(v) ? v : 0.0;
  });
  ranges.emplace_back(0.0, 1.0);
  return adapt(segs, ranges, settings);
}

} // namespace jumpdiff
