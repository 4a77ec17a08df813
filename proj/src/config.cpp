#include "reqbandit/config.hpp"

#include "reqbandit/errors.hpp"

#include <fstream>
#include <sstream>

namespace reqbandit {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json count_to_json(const ArmCountDist& d) {
  return std::visit(Overloaded{
                        [](const FixedCount& f) { return json{{"dist", "fixed"}, {"value", f.value}}; },
                        [](const UniformCount& u) {
                          return json{{"dist", "uniform"}, {"min", u.min}, {"max", u.max}};
                        },
                        [](const GeometricCount& g) {
                          return json{{"dist", "geometric"}, {"mean_lifetime", g.mean_lifetime}, {"cap", g.cap}};
                        },
                    },
                    d);
}

ArmCountDist count_from_json(const json& j) {
  const std::string dist = j.at("dist").get<std::string>();
  if (dist == "fixed") return FixedCount{j.at("value").get<std::size_t>()};
  if (dist == "uniform") return UniformCount{j.at("min").get<std::size_t>(), j.at("max").get<std::size_t>()};
  if (dist == "geometric") {
    return GeometricCount{j.at("mean_lifetime").get<double>(), j.at("cap").get<std::size_t>()};
  }
  throw std::invalid_argument("unknown arm-count distribution '" + dist + "'");
}

json real_to_json(const std::variant<FixedReal, UniformReal, ScaledBeta>& d) {
  return std::visit(Overloaded{
                        [](const FixedReal& f) { return json{{"dist", "fixed"}, {"value", f.value}}; },
                        [](const UniformReal& u) {
                          return json{{"dist", "uniform"}, {"min", u.min}, {"max", u.max}};
                        },
                        [](const ScaledBeta& b) {
                          return json{{"dist", "beta"}, {"a", b.a}, {"b", b.b}, {"min", b.min}, {"max", b.max}};
                        },
                    },
                    d);
}

std::variant<FixedReal, UniformReal, ScaledBeta> real_from_json(const json& j) {
  const std::string dist = j.at("dist").get<std::string>();
  if (dist == "fixed") return FixedReal{j.at("value").get<double>()};
  if (dist == "uniform") return UniformReal{j.at("min").get<double>(), j.at("max").get<double>()};
  if (dist == "beta") {
    return ScaledBeta{j.at("a").get<double>(), j.at("b").get<double>(), j.at("min").get<double>(),
                      j.at("max").get<double>()};
  }
  throw std::invalid_argument("unknown distribution '" + dist + "'");
}

json delay_to_json(const DelayDist& d) {
  return std::visit([](const auto& v) { return real_to_json(v); }, d);
}

DelayDist delay_from_json(const json& j) {
  return std::visit(Overloaded{
                        [](const FixedReal& f) -> DelayDist { return f; },
                        [](const UniformReal& u) -> DelayDist { return u; },
                        [](const ScaledBeta&) -> DelayDist {
                          throw std::invalid_argument("beta delays are not supported");
                        },
                    },
                    real_from_json(j));
}

CostDist cost_from_json(const json& j) {
  return std::visit([](const auto& v) -> CostDist { return v; }, real_from_json(j));
}

json constraint_to_json(const ConstraintSet& n) {
  switch (n.kind()) {
    case ConstraintSet::Kind::Naturals0:
      return "N0";
    case ConstraintSet::Kind::Naturals:
      return "N";
    case ConstraintSet::Kind::Explicit:
      return n.explicit_counts();
  }
  return nullptr;
}

ConstraintSet constraint_from_json(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "N0") return ConstraintSet::naturals0();
    if (name == "N") return ConstraintSet::naturals();
    throw std::invalid_argument("unknown constraint set '" + name + "'");
  }
  return ConstraintSet::counts(j.get<std::vector<std::size_t>>());
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

ExperimentConfig ExperimentConfig::reference() { return ExperimentConfig{}; }

json to_json(const ExperimentConfig& c) {
  const EnvironmentConfig& e = c.environment;
  json env{
      {"kind", e.kind},
      {"arms", count_to_json(e.arms)},
      {"delay", delay_to_json(e.delay)},
      {"cost", std::visit([](const auto& v) { return real_to_json(v); }, e.cost)},
      {"catalog_size", e.catalog_size},
      {"dim", e.dim},
      {"catalog_seed", e.catalog_seed},
      {"noise", e.noise},
      {"features_csv", e.features_csv},
      {"ratings_csv", e.ratings_csv},
      {"values", e.values},
  };
  json policy{
      {"name", c.policy.name},
      {"xi", c.policy.xi},
      {"lambda", c.policy.lambda},
      {"delta", optional_to_json(c.policy.delta)},
      {"alpha", optional_to_json(c.policy.alpha)},
      {"class_csv", c.policy.class_csv},
  };
  return json{
      {"environment", std::move(env)},
      {"bounds", {{"max_arms", c.max_arms}, {"tau", c.tau}, {"s", c.s}, {"c", c.c}}},
      {"constraint", constraint_to_json(c.constraint)},
      {"policy", std::move(policy)},
      {"horizon", c.horizon},
      {"replications", c.replications},
      {"seed", c.seed},
      {"gamma_iterations", c.gamma_iterations},
      {"grid_points", c.grid_points},
      {"output", c.output},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = ExperimentConfig::reference();
  if (j.contains("environment")) {
    const json& e = j.at("environment");
    EnvironmentConfig& env = c.environment;
    env.kind = e.value("kind", env.kind);
    if (e.contains("arms")) env.arms = count_from_json(e.at("arms"));
    if (e.contains("delay")) env.delay = delay_from_json(e.at("delay"));
    if (e.contains("cost")) env.cost = cost_from_json(e.at("cost"));
    env.catalog_size = e.value("catalog_size", env.catalog_size);
    env.dim = e.value("dim", env.dim);
    env.catalog_seed = e.value("catalog_seed", env.catalog_seed);
    env.noise = e.value("noise", env.noise);
    env.features_csv = e.value("features_csv", env.features_csv);
    env.ratings_csv = e.value("ratings_csv", env.ratings_csv);
    env.values = e.value("values", env.values);
  }
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    c.max_arms = b.value("max_arms", c.max_arms);
    c.tau = b.value("tau", c.tau);
    c.s = b.value("s", c.s);
    c.c = b.value("c", c.c);
  }
  if (j.contains("constraint")) c.constraint = constraint_from_json(j.at("constraint"));
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    c.policy.name = p.value("name", c.policy.name);
    c.policy.xi = p.value("xi", c.policy.xi);
    c.policy.lambda = p.value("lambda", c.policy.lambda);
    c.policy.delta = optional_from_json(p, "delta");
    c.policy.alpha = optional_from_json(p, "alpha");
    c.policy.class_csv = p.value("class_csv", c.policy.class_csv);
  }
  c.horizon = j.value("horizon", c.horizon);
  c.replications = j.value("replications", c.replications);
  c.seed = j.value("seed", c.seed);
  c.gamma_iterations = j.value("gamma_iterations", c.gamma_iterations);
  c.grid_points = j.value("grid_points", c.grid_points);
  c.output = j.value("output", c.output);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string dump_config(const ExperimentConfig& config) { return to_json(config).dump(2); }

}  // namespace reqbandit
