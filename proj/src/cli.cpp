#include "jumpdiff/cli.hpp"

#include "jumpdiff/config.hpp"
#include "jumpdiff/design.hpp"
#include "jumpdiff/errors.hpp"
#include "jumpdiff/estimators.hpp"
#include "jumpdiff/harness.hpp"
#include "jumpdiff/path_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace jumpdiff {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options
{
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format;
  std::string input;
};

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& file)
{
  std::ofstream f(file);
  if (!f)
    throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  return f;
}

void write_json(const fs::path& file, const json& j)
{
  auto f = open_out(file);
  f << j.dump(2) << "\n";
}

RunConfig prepare(const Options& o)
{
  auto cfg = load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.simulation.seed = *o.seed;
  }
  if (!o.format.empty())
    cfg.format = o.format;
  if (!o.input.empty())
    cfg.input = o.input;
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "resolved_config.json", to_json(cfg));
  return cfg;
}

void write_curve_csv(const fs::path& file, const QuantileCurves& q)
{
  auto f = open_out(file);
  f << "x,q25,q50,q75,mean,sd_emp,sd_asym,n_valid\n";
  for (const auto& p : q)
    f << num(p.x) << ',' << num(p.q25) << ',' << num(p.q50) << ',' << num(p.q75) << ','
      << num(p.mean) << ',' << num(p.sd_emp) << ',' << num(p.sd_asym) << ',' << p.n_valid << "\n";
}

void write_s2_csv(const fs::path& file, const S2Contour& c)
{
  auto f = open_out(file);
  f << "gamma,alpha,s2\n";
  for (std::size_t i = 0; i < c.gammas.size(); ++i)
    for (std::size_t j = 0; j < c.alphas.size(); ++j)
      f << num(c.gammas[i]) << ',' << num(c.alphas[j]) << ',' << num(c.s2[i][j]) << "\n";
}

S2Contour run_s2(const RunConfig& cfg)
{
  return s2_contour(design_function_by_name(cfg.s2.f), cfg.s2.gammas, cfg.s2.alphas);
}

std::vector<std::string> write_prop1(const fs::path& dir, const RunConfig& cfg, std::ostream& out)
{
  const auto model = build_model(cfg.model);
  const auto levy = freeze(model, cfg.prop1.x);
  const auto res = prop1_slope_experiment(levy, design_function_by_name(cfg.prop1.f), cfg.prop1.u,
                                          cfg.prop1.h_grid);
  {
    auto f = open_out(dir / "prop1_errors.csv");
    f << "h,mean_error,var_error\n";
    for (std::size_t i = 0; i < res.h.size(); ++i)
      f << num(res.h[i]) << ',' << num(res.mean_error[i]) << ',' << num(res.var_error[i]) << "\n";
  }
  {
    auto f = open_out(dir / "prop1_slopes.csv");
    f << "quantity,slope,slope_se\n";
    f << "mean," << num(res.mean_fit.slope) << ',' << num(res.mean_fit.slope_se) << "\n";
    f << "variance," << num(res.var_fit.slope) << ',' << num(res.var_fit.slope_se) << "\n";
  }
  out << "prop1 slopes: mean " << res.mean_fit.slope << " (se " << res.mean_fit.slope_se
      << "), variance " << res.var_fit.slope << " (se " << res.var_fit.slope_se << ")\n";
  return { "prop1_errors.csv", "prop1_slopes.csv" };
}

int cmd_simulate(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  const auto model = build_model(cfg.model);
  const auto path = simulate(model, cfg.simulation);
  const bool binary = cfg.format == "binary";
  const auto file = fs::path(o.out) / (binary ? "path.jdpf" : "path.csv");
  save_path(path, file.string(), binary);
  out << "wrote " << path.size() << " observations to " << file.string() << "\n";
  return 0;
}

int cmd_estimate(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  if (cfg.input.empty())
    throw ValidationError("input", "estimate needs a path file (config 'input' or --input)");
  const auto path = load_path(cfg.input);
  const Increments inc(path);
  const auto curves = estimate_curves(inc, cfg.estimator, curve_names());
  auto f = open_out(fs::path(o.out) / "estimates.csv");
  f << "x,estimator,value,sd,mhat,count,status\n";
  for (const auto& name : curve_names())
    for (const auto& p : curves.at(name))
      f << num(p.x) << ',' << name << ',' << num(p.value) << ',' << num(p.sd) << ','
        << num(p.mhat) << ',' << p.count << ',' << to_string(p.status) << "\n";
  out << "estimated " << curve_names().size() << " curves at " << cfg.estimator.x_grid.size()
      << " points (u = " << resolve_u(cfg.estimator, inc) << ")\n";
  return 0;
}

int cmd_experiment(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  const fs::path dir(o.out);
  std::vector<std::string> files;
  const auto curves = curves_from_outputs(cfg.outputs);
  if (!curves.empty()) {
    ExperimentPlan plan;
    plan.simulation = cfg.simulation;
    plan.estimator = cfg.estimator;
    plan.replications = cfg.replications;
    plan.curves = curves;
    const auto model = build_model(cfg.model);
    const auto res = run_experiment(model, plan, o.threads);
    for (const auto& [name, q] : res) {
      const std::string file = name + "_curve.csv";
      write_curve_csv(dir / file, q);
      files.push_back(file);
    }
  }
  for (const auto& output : cfg.outputs) {
    if (output == "s2_contour") {
      write_s2_csv(dir / "s2_contour.csv", run_s2(cfg));
      files.push_back("s2_contour.csv");
    } else if (output == "prop1_slopes") {
      for (auto& f : write_prop1(dir, cfg, out))
        files.push_back(f);
    }
  }
  write_json(dir / "manifest.json", json{ { "plan", to_json(cfg) }, { "files", files } });
  out << "experiment wrote " << files.size() << " output files to " << dir.string() << "\n";
  return 0;
}

int cmd_s2(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  write_s2_csv(fs::path(o.out) / "s2_contour.csv", run_s2(cfg));
  out << "wrote s2 contour (" << cfg.s2.gammas.size() << " x " << cfg.s2.alphas.size() << ")\n";
  return 0;
}

int cmd_prop1(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  write_prop1(fs::path(o.out), cfg, out);
  return 0;
}

int cmd_audit(const Options& o, std::ostream& out)
{
  const auto cfg = prepare(o);
  const auto model = build_model(cfg.model);
  const auto& sim = cfg.simulation;
  const auto& est = cfg.estimator;
  const double T = static_cast<double>(sim.steps()) * sim.mesh;
  const double b = est.kernel.bandwidth;
  const double u = est.u_rule.resolve(T, b, sim.mesh);

  json report;
  out << "resolved u = " << u << " (T = " << T << ", b = " << b << ", h = " << sim.mesh << ")\n";
  report["u"] = u;
  json rates = json::array();
  for (double x : est.x_grid) {
    const double a = model.jumps.alpha(x), d = model.jumps.delta(x);
    const auto r = audit_rates(T, b, sim.mesh, u, a, d);
    out << "x = " << x << ": T b h^2 u^(8-alpha) = " << r.p_bias_generator
        << ", T b u^(alpha-2 delta) = " << r.p_bias_perturbation
        << ", T b^3 u^alpha (log u)^2 = " << r.p_bias_kernel << "\n";
    for (const auto& w : r.warnings)
      out << "  warning: " << w << "\n";
    rates.push_back({ { "x", x },
                      { "T_b_h2_u8ma", r.p_bias_generator },
                      { "T_b_uam2d", r.p_bias_perturbation },
                      { "T_b3_ua_logu2", r.p_bias_kernel },
                      { "warnings", r.warnings } });
  }
  report["rates"] = rates;

  const auto ma = audit_model(model);
  out << "model '" << model.name << "': alpha in [" << ma.alpha_min << ", " << ma.alpha_max
      << "], symmetry residual " << ma.symmetry_residual << ", tail bound ratio "
      << ma.tail_bound_ratio << (ma.ok() ? "" : " (violations)") << "\n";
  for (const auto& v : ma.violations)
    out << "  violation: " << v << "\n";
  report["model"] = { { "alpha_min", ma.alpha_min },
                      { "alpha_max", ma.alpha_max },
                      { "symmetry_residual", ma.symmetry_residual },
                      { "tail_bound_ratio", ma.tail_bound_ratio },
                      { "violations", ma.violations } };

  json fns = json::object();
  for (const auto& name : { est.f_ja, est.f_drift, est.f_sigma2 }) {
    const auto ca = check_class(design_function_by_name(name));
    out << "design function '" << name << "': f(0) = " << ca.f0 << ", f'(0) = " << ca.d1_0
        << ", f''(0) = " << ca.d2_0 << (ca.ok() ? "" : " (violations)") << "\n";
    fns[name] = { { "f0", ca.f0 }, { "d1_0", ca.d1_0 }, { "d2_0", ca.d2_0 }, { "violations", ca.violations } };
  }
  report["design_functions"] = fns;
  write_json(fs::path(o.out) / "audit.json", report);
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Simulation and nonparametric estimation for state-dependent jump diffusions" };
  app.require_subcommand(1);
  Options o;

  using Handler = int (*)(const Options&, std::ostream&);
  std::vector<std::pair<CLI::App*, Handler>> subs;
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "output directory")->capture_default_str();
    s->add_option("--seed", o.seed, "master seed (overrides the config)");
    s->add_option("--threads", o.threads, "worker threads, 0 = all cores")->envname("JUMPDIFF_THREADS");
    s->add_option("--format", o.format, "path format")->check(CLI::IsMember({ "csv", "binary" }));
    s->add_option("--input", o.input, "path file for estimate (overrides the config)");
    subs.emplace_back(s, h);
  };
  add("simulate", "simulate one path", cmd_simulate);
  add("estimate", "estimate curves from a path file", cmd_estimate);
  add("experiment", "replicated simulate/estimate experiment", cmd_experiment);
  add("s2-contour", "variance factor s2 on a (gamma, alpha) grid", cmd_s2);
  add("prop1-slopes", "conditional-moment error slopes against the Fourier oracle", cmd_prop1);
  add("audit", "tuning-rule and model diagnostics", cmd_audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [s, h] : subs)
      if (s->parsed())
        return h(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

} // namespace jumpdiff
