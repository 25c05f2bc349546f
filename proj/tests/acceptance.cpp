// Acceptance gate: one PASS/FAIL line per criterion.

#include "jumpdiff/cli.hpp"
#include "jumpdiff/design.hpp"
#include "jumpdiff/functionals.hpp"
#include "jumpdiff/harness.hpp"
#include "jumpdiff/levy_oracle.hpp"
#include "jumpdiff/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace jumpdiff;
namespace fs = std::filesystem;

namespace {

constexpr double z75 = 0.6744897501960817; // standard normal 75% quantile

struct Outcome
{
  bool pass = true;
  std::string detail;
};

class Report
{
public:
  void check(bool ok, const std::string& line)
  {
    pass_ = pass_ && ok;
    lines_.push_back((ok ? "  ok   " : "  FAIL ") + line);
  }
  Outcome done(double seconds, double limit)
  {
    check(seconds <= limit, fmt("runtime %.1f s (limit %.0f s)", seconds, limit));
    Outcome o;
    o.pass = pass_;
    for (const auto& l : lines_)
      o.detail += l + "\n";
    return o;
  }

  template<class... A>
  static std::string fmt(const char* f, A... a)
  {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
  }

private:
  bool pass_ = true;
  std::vector<std::string> lines_;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned threads()
{
  if (const char* e = std::getenv("JUMPDIFF_THREADS"))
    return static_cast<unsigned>(std::strtoul(e, nullptr, 10));
  return 0;
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

double iqr(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
}

// Values and plug-in sds of the status-ok entries.
struct Column
{
  std::vector<double> value, sd;
  std::size_t total = 0;
  void add(const PointEstimate& p)
  {
    ++total;
    if (p.ok()) {
      value.push_back(p.value);
      sd.push_back(p.sd);
    }
  }
};

Outcome a1()
{
  const auto t0 = Clock::now();
  Report r;
  double worst = 0.0;
  for (const auto& f : { builtin_ja_f(), builtin_sigma2_f() })
    for (double a : { 1.2, 1.65, 1.9 }) {
      const double base = frac_functional(f, a).value;
      for (double u : { 2.0, 10.0 }) {
        const double scaled = frac_functional(rescale(f, u), a).value;
        worst = std::max(worst, std::abs(scaled / (std::pow(u, a) * base) - 1.0));
      }
    }
  r.check(worst <= 1e-8, Report::fmt("scaling identity: worst relative error %.2e (tol 1e-8)", worst));
  const double c = stable_constant(1.5);
  const double cf = stable_constant_closed_form(1.5);
  const double rel = std::abs(c / cf - 1.0);
  r.check(rel <= 1e-8, Report::fmt("C(1.5) quadrature %.15g vs closed form %.15g: rel %.2e", c, cf, rel));
  return r.done(since(t0), 1.0);
}

Outcome a2()
{
  const auto t0 = Clock::now();
  Report r;
  const std::size_t N = 1000000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(N));
  const std::vector<double> grid{ 0.5, 1.0, 2.0, 4.0, 8.0 };

  auto check_cf = [&](const std::string& label, const std::function<double()>& draw,
                      const std::function<double(double)>& exponent) {
    std::vector<double> xs(N);
    for (auto& x : xs)
      x = draw();
    double worst = 0.0;
    for (double u : grid) {
      double re = 0.0, im = 0.0;
      for (double x : xs) {
        re += std::cos(u * x);
        im += std::sin(u * x);
      }
      re /= static_cast<double>(N);
      im /= static_cast<double>(N);
      worst = std::max({ worst, std::abs(re - std::exp(-exponent(u))), std::abs(im) });
    }
    r.check(worst <= tol, Report::fmt("%s: max |ecf - cf| %.2e (tol %.2e)", label.c_str(), worst, tol));
  };

  for (double a : { 1.2, 1.65, 1.9 }) {
    RngStream rng(2024, static_cast<std::uint64_t>(a * 100));
    check_cf(Report::fmt("sample_sas alpha=%.2f", a), [&] { return sample_sas(a, 1.0, rng); },
             [a](double u) { return std::pow(u, a); });
  }
  const auto m = build_example_model();
  const double dt = 0.01;
  for (double x : { 0.0, 1.0 }) {
    RngStream rng(2025, static_cast<std::uint64_t>(x));
    const double a = m.jumps.alpha(x);
    const double c = m.jumps.r(x) * stable_constant(a);
    check_cf(Report::fmt("stable_increment x=%.1f dt=%.2f", x, dt), [&] { return stable_increment(m, x, dt, rng); },
             [&](double u) { return dt * c * std::pow(u, a); });
  }
  return r.done(since(t0), 30.0);
}

Outcome a3()
{
  const auto t0 = Clock::now();
  Report r;
  const std::vector<double> hs{ 1e-4, 3e-4, 1e-3, 3e-3, 1e-2 };
  const auto f = builtin_drift_f();

  LevyRestriction gauss;
  gauss.mu = -1.0;
  gauss.sigma2 = 1.0;
  gauss.r = 0.0;
  LevyRestriction stable;
  stable.mu = -1.0;
  stable.sigma2 = 0.0;
  stable.alpha = 1.8;
  stable.r = 1.0;
  LevyRestriction mixed = stable;
  mixed.sigma2 = 1.0;
  mixed.tail.kind = TailKind::compound_poisson_t;
  mixed.tail.dof = 1.2;
  mixed.tail.intensity = 1.0;

  for (const auto& [name, levy] : { std::pair{ "gaussian", gauss }, std::pair{ "stable(1.8)", stable },
                                    std::pair{ "mixed", mixed } }) {
    const auto res = prop1_slope_experiment(levy, f, 1.0, hs);
    r.check(res.mean_fit.slope >= 1.8,
            Report::fmt("%s mean slope %.3f (se %.3f)", name, res.mean_fit.slope, res.mean_fit.slope_se));
    r.check(res.var_fit.slope >= 1.8,
            Report::fmt("%s variance slope %.3f (se %.3f)", name, res.var_fit.slope, res.var_fit.slope_se));
  }
  return r.done(since(t0), 60.0);
}

// Shared simulations for the jump-activity criteria.
struct JaRep
{
  std::vector<PointEstimate> base; // gamma 2, c 0.07 at x = -1, 0, 1
  PointEstimate g5c07;             // gamma 5, c 0.07 at x = 0
  PointEstimate g5c05;             // gamma 5, c 0.05 at x = 0
};

std::vector<JaRep> ja_replications(const ModelSpec& m, double& seconds)
{
  const auto t0 = Clock::now();
  SimulationPlan plan;
  plan.horizon = 10.0;
  plan.mesh = 1e-4;
  plan.seed = 4001;
  EstimatorConfig c;
  c.kernel.bandwidth = 0.5;
  c.gamma = 2.0;
  c.u_rule.value = 0.07;
  auto c5 = c;
  c5.gamma = 5.0;
  auto c5b = c5;
  c5b.u_rule.value = 0.05;

  const std::function<JaRep(std::size_t)> job = [&](std::size_t i) {
    auto p = plan;
    p.stream = i;
    const Increments inc(simulate(m, p));
    JaRep rep;
    for (double x : { -1.0, 0.0, 1.0 })
      rep.base.push_back(alpha_hat(inc, c, x));
    rep.g5c07 = alpha_hat(inc, c5, 0.0);
    rep.g5c05 = alpha_hat(inc, c5b, 0.0);
    return rep;
  };
  auto reps = run_replications(200, threads(), job);
  seconds = since(t0);
  return reps;
}

Outcome a4(const ModelSpec& m, const std::vector<JaRep>& reps, double sim_seconds)
{
  const auto t0 = Clock::now();
  Report r;
  const std::vector<double> xs{ -1.0, 0.0, 1.0 };
  for (std::size_t j = 0; j < xs.size(); ++j) {
    Column col;
    for (const auto& rep : reps)
      col.add(rep.base[j]);
    const double a = m.jumps.alpha(xs[j]);
    const double med = median(col.value);
    const double sd = median(col.sd);
    const double emp = iqr(col.value);
    const double asym = 2.0 * z75 * sd;
    r.check(std::abs(med - a) <= 3.0 * sd,
            Report::fmt("x=%+.0f: |median %.4f - alpha %.4f| = %.4f vs 3 sd = %.4f (%zu/%zu valid)", xs[j], med, a,
                        std::abs(med - a), 3.0 * sd, col.value.size(), col.total));
    r.check(emp >= 0.5 * asym && emp <= 2.0 * asym,
            Report::fmt("x=%+.0f: IQR %.4f vs asymptotic %.4f (ratio %.2f, band [0.5, 2])", xs[j], emp, asym,
                        emp / asym));
  }
  return r.done(sim_seconds + since(t0), 900.0);
}

Outcome a5(const ModelSpec& m, const std::vector<JaRep>& reps, double sim_seconds)
{
  const auto t0 = Clock::now();
  Report r;
  const double a = m.jumps.alpha(0.0);
  Column g2, g5, g5b;
  for (const auto& rep : reps) {
    g2.add(rep.base[1]);
    g5.add(rep.g5c07);
    g5b.add(rep.g5c05);
  }
  const double b2 = std::abs(median(g2.value) - a);
  const double b5 = std::abs(median(g5.value) - a);
  const double b5b = std::abs(median(g5b.value) - a);
  const double sd5b = median(g5b.sd);
  r.check(b5 > b2, Report::fmt("bias(gamma=5, c=0.07) = %.4f > bias(gamma=2, c=0.07) = %.4f", b5, b2));
  r.check(b5b <= 3.0 * sd5b, Report::fmt("bias(gamma=5, c=0.05) = %.4f vs 3 sd = %.4f", b5b, 3.0 * sd5b));
  return r.done(sim_seconds + since(t0), 900.0);
}

struct DriftRep
{
  std::vector<PointEstimate> mu, mu_f;
  PointEstimate s2;
};

Outcome a6(const ModelSpec& m)
{
  const auto t0 = Clock::now();
  Report r;
  SimulationPlan plan;
  plan.horizon = 100.0;
  plan.mesh = 1e-3;
  plan.seed = 6001;
  EstimatorConfig c;
  c.kernel.bandwidth = 0.5;
  const std::vector<double> xs{ -1.0, 0.0, 1.0 };

  const std::function<DriftRep(std::size_t)> job = [&](std::size_t i) {
    auto p = plan;
    p.stream = i;
    const Increments inc(simulate(m, p));
    DriftRep rep;
    for (double x : xs) {
      rep.mu.push_back(mu_hat(inc, c, x, 1.0));
      rep.mu_f.push_back(mu_hat(inc, c, x, 10.0));
    }
    rep.s2 = sigma2_hat(inc, c, 0.0, 20.0);
    return rep;
  };
  const auto reps = run_replications(200, threads(), job);

  for (std::size_t j = 0; j < xs.size(); ++j) {
    Column mu, mf;
    for (const auto& rep : reps) {
      mu.add(rep.mu[j]);
      mf.add(rep.mu_f[j]);
    }
    const double med = median(mu.value);
    const double sd = median(mu.sd);
    r.check(std::abs(med + xs[j]) <= 3.0 * sd,
            Report::fmt("x=%+.0f: |median mu %.4f - mu(x) %.4f| = %.4f vs 3 sd = %.4f", xs[j], med, -xs[j],
                        std::abs(med + xs[j]), 3.0 * sd));
    const double i1 = iqr(mu.value), i10 = iqr(mf.value);
    r.check(i10 <= i1, Report::fmt("x=%+.0f: IQR(filtered, u=10) %.4f <= IQR(u=1) %.4f", xs[j], i10, i1));
  }
  Column s2;
  for (const auto& rep : reps)
    s2.add(rep.s2);
  const double ms2 = median(s2.value);
  r.check(ms2 >= 0.85 && ms2 <= 1.15, Report::fmt("median sigma2(0) with u=20: %.4f (band [0.85, 1.15])", ms2));
  return r.done(since(t0), 900.0);
}

Outcome a7(const ModelSpec& m)
{
  const auto t0 = Clock::now();
  Report r;
  const double x = 0.0;
  const double a = m.jumps.alpha(x), d = m.jumps.delta(x), rr = m.jumps.r(x);
  const auto f = builtin_ja_f();
  const double fa = frac_functional(f, a).value;
  std::vector<double> us, es;
  for (double u = 2.0; u <= 128.0; u *= 2.0) {
    us.push_back(u);
    es.push_back(std::abs(jump_gen_star(m, f, u, x) - std::pow(u, a) * rr * fa));
  }
  const auto fit = loglog_fit(us, es);
  std::string errs;
  for (double e : es)
    errs += Report::fmt(" %.4g", e);
  r.check(fit.slope <= a - d + 0.1, Report::fmt("growth exponent %.3f (se %.3f) vs alpha-delta+0.1 = %.3f; e(u):%s",
                                                fit.slope, fit.slope_se, a - d + 0.1, errs.c_str()));
  return r.done(since(t0), 10.0);
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome a8()
{
  const auto t0 = Clock::now();
  Report r;
  const auto dir = fs::temp_directory_path() / "jumpdiff_acceptance_a8";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({
    "seed": 8,
    "simulation": { "horizon": 5.0, "mesh": 0.001, "substeps": 4 },
    "estimator": { "x_grid": [-1, 0, 1], "clamp_alpha": true },
    "experiment": { "replications": 16,
                    "outputs": ["alpha_curve", "rstar_curve", "mu_curve", "mu_filtered_curve",
                                "sigma2_curve", "s2_contour", "prop1_slopes"] },
    "s2_contour": { "gammas": [2, 4], "alphas": [1.7, 1.9] }
  })";

  auto run = [&](const fs::path& config, const fs::path& out, const char* workers) {
    const std::string c = config.string(), o = out.string();
    const char* argv[] = { "jumpdiff", "experiment", "--config", c.c_str(), "--out", o.c_str(), "--threads", workers };
    std::ostringstream so, se;
    return run_cli(8, argv, so, se);
  };
  const auto first = dir / "first";
  r.check(run(cfg, first, "1") == 0, "initial experiment exits 0");
  const auto manifest = nlohmann::json::parse(slurp(first / "manifest.json"));
  auto files = manifest.at("files").get<std::vector<std::string>>();
  files.push_back("manifest.json");
  files.push_back("resolved_config.json");
  for (const char* workers : { "1", "3", "8" }) {
    const auto again = dir / (std::string("replay_") + workers);
    r.check(run(first / "resolved_config.json", again, workers) == 0,
            Report::fmt("replay with %s worker(s) exits 0", workers));
    std::size_t same = 0;
    for (const auto& f : files)
      same += fs::exists(again / f) && slurp(first / f) == slurp(again / f);
    r.check(same == files.size(),
            Report::fmt("replay with %s worker(s): %zu of %zu files bit-identical", workers, same, files.size()));
  }
  fs::remove_all(dir);
  return r.done(since(t0), 600.0);
}

} // namespace

int main()
{
  bool all = true;
  auto emit = [&](const char* id, const char* title, const Outcome& o) {
    std::printf("%s %s: %s\n%s", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      Outcome o;
      o.pass = false;
      o.detail = std::string("  error: ") + e.what() + "\n";
      return o;
    }
  };

  emit("A1", "quadrature identities", guarded(a1));
  emit("A2", "sampler characteristic functions", guarded(a2));
  emit("A3", "small-time error slopes", guarded(a3));

  const auto model = build_example_model();
  double sim_seconds = 0.0;
  std::vector<JaRep> reps;
  std::string sim_error;
  try {
    reps = ja_replications(model, sim_seconds);
  } catch (const std::exception& e) {
    sim_error = e.what();
  }
  auto with_reps = [&](Outcome (*fn)(const ModelSpec&, const std::vector<JaRep>&, double)) {
    return guarded([&] {
      if (!sim_error.empty())
        throw std::runtime_error(sim_error);
      return fn(model, reps, sim_seconds);
    });
  };
  emit("A4", "jump activity reproduction", with_reps(a4));
  emit("A5", "gamma sensitivity", with_reps(a5));
  emit("A6", "drift reproduction", guarded([&] { return a6(model); }));
  emit("A7", "generator rate", guarded([&] { return a7(model); }));
  emit("A8", "determinism", guarded(a8));

  std::printf("acceptance: %s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
