#include "jumpdiff/config.hpp"

#include "jumpdiff/errors.hpp"
#include "jumpdiff/json_schema.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace jumpdiff {

using nlohmann::json;

const json& config_schema()
{
  static const json schema = json::parse(
#include "config_schema.inc"
  );
  return schema;
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n)
{
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

template<class T>
void read(const json& obj, const char* key, T& dst)
{
  if (auto it = obj.find(key); it != obj.end())
    dst = it->get<T>();
}

json formula_json(const std::string& kind, std::initializer_list<std::pair<const char*, double>> p)
{
  json j{ { "kind", kind } };
  for (const auto& [k, v] : p)
    j[k] = v;
  return j;
}

StateFunction formula_from_json(const json& j, const std::string& field)
{
  std::map<std::string, double> params;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind")
      params[it.key()] = it.value().get<double>();
  return make_formula(j.at("kind").get<std::string>(), params, field);
}

} // namespace

json resolve_model_section(const json& section)
{
  const std::string kind = section.at("model").get<std::string>();
  json m = section;
  auto need = [&](const char* key) {
    if (!m.contains(key))
      throw ValidationError(std::string("model.") + key, "required for model '" + kind + "'");
  };
  auto disallow = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (m.contains(k))
        throw ValidationError(std::string("model.") + k, "not used by model '" + kind + "'");
  };
  if (kind == "example") {
    disallow({ "alpha0", "mu", "sigma2", "alpha", "r", "delta", "tail" });
  } else if (kind == "capped") {
    disallow({ "r", "delta", "tail" });
    need("alpha0");
    need("alpha");
    if (!m.contains("mu"))
      m["mu"] = formula_json("linear", { { "intercept", 0.0 }, { "slope", -1.0 } });
    if (!m.contains("sigma2"))
      m["sigma2"] = formula_json("constant", { { "value", 1.0 } });
  } else {
    disallow({ "alpha0" });
    need("mu");
    need("sigma2");
    need("alpha");
    if (!m.contains("r"))
      m["r"] = formula_json("constant", { { "value", 1.0 } });
    if (!m.contains("delta"))
      m["delta"] = m["alpha"];
    if (!m.contains("tail"))
      m["tail"] = json{ { "kind", "none" } };
    auto& t = m["tail"];
    if (t["kind"] == "compound_poisson_t") {
      if (!t.contains("intensity"))
        t["intensity"] = 1.0;
      if (!t.contains("dof"))
        t["dof"] = 1.2;
    } else if (t.contains("intensity") || t.contains("dof")) {
      throw ValidationError("model.tail", "intensity and dof apply to compound_poisson_t only");
    }
  }
  return m;
}

ModelSpec build_model(const json& raw)
{
  const json m = resolve_model_section(raw);
  const std::string kind = m.at("model").get<std::string>();
  ModelSpec spec;
  if (kind == "example") {
    spec = build_example_model();
  } else if (kind == "capped") {
    spec = build_capped_model(m.at("alpha0").get<double>(),
                              formula_from_json(m.at("alpha"), "model.alpha"),
                              formula_from_json(m.at("mu"), "model.mu"),
                              formula_from_json(m.at("sigma2"), "model.sigma2"));
  } else {
    spec.name = "custom";
    spec.mu = formula_from_json(m.at("mu"), "model.mu");
    spec.sigma2 = formula_from_json(m.at("sigma2"), "model.sigma2");
    spec.jumps.alpha = formula_from_json(m.at("alpha"), "model.alpha");
    spec.jumps.r = formula_from_json(m.at("r"), "model.r");
    spec.jumps.delta = formula_from_json(m.at("delta"), "model.delta");
    const auto& t = m.at("tail");
    double amin = 2.0, rmax = 0.0;
    for (double x : audit_x_grid()) {
      amin = std::min(amin, spec.jumps.alpha(x));
      rmax = std::max(rmax, spec.jumps.r(x));
    }
    spec.jumps.tail_exponent = amin;
    spec.jumps.density_bound = std::max(rmax, 1e-300);
    if (t.at("kind") == "compound_poisson_t") {
      spec.jumps.tail.kind = TailKind::compound_poisson_t;
      spec.jumps.tail.intensity = t.at("intensity").get<double>();
      spec.jumps.tail.dof = t.at("dof").get<double>();
      spec.jumps.tail_exponent = std::min(amin, spec.jumps.tail.dof);
      spec.jumps.density_bound = rmax + spec.jumps.tail.intensity;
    }
  }
  validate_model(spec);
  return spec;
}

std::vector<std::string> curves_from_outputs(const std::vector<std::string>& outputs)
{
  std::vector<std::string> curves;
  const std::string suffix = "_curve";
  for (const auto& o : outputs)
    if (o.size() > suffix.size() && o.compare(o.size() - suffix.size(), suffix.size(), suffix) == 0)
      curves.push_back(o.substr(0, o.size() - suffix.size()));
  return curves;
}

RunConfig parse_config(const json& doc)
{
  JsonSchema(config_schema()).validate(doc);
  RunConfig c;
  read(doc, "seed", c.seed);
  read(doc, "format", c.format);
  read(doc, "input", c.input);
  c.model = resolve_model_section(doc.value("model", json{ { "model", "example" } }));

  const json sim = doc.value("simulation", json::object());
  read(sim, "horizon", c.simulation.horizon);
  read(sim, "mesh", c.simulation.mesh);
  read(sim, "substeps", c.simulation.substeps);
  read(sim, "x0", c.simulation.x0);
  read(sim, "stream", c.simulation.stream);
  if (sim.contains("burn_in"))
    c.simulation.burn_in = sim["burn_in"].get<double>();
  c.simulation.burn_in = c.simulation.resolved_burn_in();
  c.simulation.seed = c.seed;
  c.simulation.validate();

  const json est = doc.value("estimator", json::object());
  auto& e = c.estimator;
  if (est.contains("kernel"))
    e.kernel.shape = kernel_shape_from_string(est["kernel"].get<std::string>());
  read(est, "bandwidth", e.kernel.bandwidth);
  read(est, "gamma", e.gamma);
  if (est.contains("u_rule")) {
    const auto& u = est["u_rule"];
    e.u_rule.kind = u["kind"] == "explicit" ? URule::Kind::explicit_value : URule::Kind::power;
    e.u_rule.value = u["value"].get<double>();
  }
  read(est, "x_grid", e.x_grid);
  read(est, "f_ja", e.f_ja);
  read(est, "f_drift", e.f_drift);
  read(est, "f_sigma2", e.f_sigma2);
  read(est, "u_filtered", e.u_filtered);
  read(est, "u_sigma2", e.u_sigma2);
  read(est, "clamp_alpha", e.clamp_alpha);
  read(est, "normalize_rstar_by_mhat", e.normalize_rstar_by_mhat);
  read(est, "min_count", e.min_count);
  e.validate();

  const json exp = doc.value("experiment", json::object());
  read(exp, "replications", c.replications);
  c.outputs = exp.value("outputs", std::vector<std::string>{ "alpha_curve" });

  const json s2 = doc.value("s2_contour", json::object());
  read(s2, "f", c.s2.f);
  c.s2.gammas = s2.value("gammas", linspace(1.5, 5.0, 8));
  c.s2.alphas = s2.value("alphas", linspace(1.65, 1.9, 6));
  for (std::size_t i = 0; i < c.s2.gammas.size(); ++i)
    if (!(c.s2.gammas[i] > 0.0) || c.s2.gammas[i] == 1.0)
      throw ValidationError("s2_contour.gammas[" + std::to_string(i) + "]", "must be positive and != 1");
  for (std::size_t i = 0; i < c.s2.alphas.size(); ++i)
    if (!(c.s2.alphas[i] > 0.0 && c.s2.alphas[i] < 2.0))
      throw ValidationError("s2_contour.alphas[" + std::to_string(i) + "]", "must lie in (0, 2)");
  try {
    (void)design_function_by_name(c.s2.f);
  } catch (const ValidationError&) {
    throw ValidationError("s2_contour.f", "unknown design function '" + c.s2.f + "'");
  }

  const json p1 = doc.value("prop1", json::object());
  read(p1, "x", c.prop1.x);
  read(p1, "u", c.prop1.u);
  read(p1, "f", c.prop1.f);
  read(p1, "h_grid", c.prop1.h_grid);
  try {
    (void)design_function_by_name(c.prop1.f);
  } catch (const ValidationError&) {
    throw ValidationError("prop1.f", "unknown design function '" + c.prop1.f + "'");
  }

  (void)build_model(c.model);
  return c;
}

RunConfig load_config(const std::string& file)
{
  std::ifstream in(file);
  if (!in)
    throw ValidationError("config", "cannot open '" + file + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c)
{
  json j;
  j["seed"] = c.seed;
  j["format"] = c.format;
  if (!c.input.empty())
    j["input"] = c.input;
  j["model"] = c.model;
  j["simulation"] = { { "horizon", c.simulation.horizon },
                      { "mesh", c.simulation.mesh },
                      { "substeps", c.simulation.substeps },
                      { "burn_in", c.simulation.resolved_burn_in() },
                      { "x0", c.simulation.x0 },
                      { "stream", c.simulation.stream } };
  const auto& e = c.estimator;
  j["estimator"] = {
    { "kernel", to_string(e.kernel.shape) },
    { "bandwidth", e.kernel.bandwidth },
    { "gamma", e.gamma },
    { "u_rule",
      { { "kind", e.u_rule.kind == URule::Kind::explicit_value ? "explicit" : "power" },
        { "value", e.u_rule.value } } },
    { "x_grid", e.x_grid },
    { "f_ja", e.f_ja },
    { "f_drift", e.f_drift },
    { "f_sigma2", e.f_sigma2 },
    { "u_filtered", e.u_filtered },
    { "u_sigma2", e.u_sigma2 },
    { "clamp_alpha", e.clamp_alpha },
    { "normalize_rstar_by_mhat", e.normalize_rstar_by_mhat },
    { "min_count", e.min_count },
  };
  j["experiment"] = { { "replications", c.replications }, { "outputs", c.outputs } };
  j["s2_contour"] = { { "f", c.s2.f }, { "gammas", c.s2.gammas }, { "alphas", c.s2.alphas } };
  j["prop1"] = { { "x", c.prop1.x }, { "u", c.prop1.u }, { "f", c.prop1.f }, { "h_grid", c.prop1.h_grid } };
  return j;
}

} // namespace jumpdiff
