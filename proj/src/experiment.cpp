#include "reqbandit/experiment.hpp"

#include "numfmt.hpp"
#include "reqbandit/errors.hpp"
#include "reqbandit/oaf.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace reqbandit {

namespace {

constexpr std::uint64_t kGammaSolverStream = 2;

std::size_t problem_dim(const ExperimentConfig& config, const std::optional<FeatureDataset>& dataset) {
  if (dataset) return dataset->dim();
  if (config.environment.kind == "linear_catalog") return config.environment.dim;
  return 1;
}

RewardNoise noise_from(const std::string& name) {
  if (name == "gaussian") return GaussianNoise{1.0};
  if (name == "none") return Noiseless{};
  throw std::invalid_argument("unknown noise '" + name + "'");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

Problem build_problem(const ExperimentConfig& config) {
  const EnvironmentConfig& ec = config.environment;
  std::optional<FeatureDataset> dataset;
  auto env = std::make_shared<Environment>();
  env->arm_count = ec.arms;
  env->delay = ec.delay;
  env->cost = ec.cost;

  std::optional<RewardModel> model;
  if (ec.kind == "linear_catalog") {
    LinearCatalog catalog = make_linear_catalog(ec.catalog_size, ec.dim, ec.catalog_seed);
    env->contexts = CatalogSource{catalog.catalog};
    model.emplace(LinearMean{catalog.theta}, noise_from(ec.noise));
  } else if (ec.kind == "dataset") {
    std::optional<std::filesystem::path> ratings;
    if (!ec.ratings_csv.empty()) ratings = ec.ratings_csv;
    dataset = load_feature_dataset(ec.features_csv, ratings);
    env->contexts = CatalogSource{dataset->catalog};
    model.emplace(dataset_reward_model(*dataset));
  } else if (ec.kind == "fixed") {
    FixedSource src;
    for (std::size_t i = 0; i < ec.values.size(); ++i) {
      src.arms.push_back({i, Eigen::VectorXd::Constant(1, ec.values[i])});
    }
    env->contexts = std::move(src);
    model.emplace(FirstFeatureMean{}, noise_from(ec.noise));
  } else if (ec.kind == "mortal") {
    if (ec.values.empty()) throw EmptyCatalog();
    env->contexts = SharedValueSource{ec.values};
    model.emplace(FirstFeatureMean{}, Noiseless{});
  } else {
    throw std::invalid_argument("unknown environment kind '" + ec.kind + "'");
  }

  ProblemSpec spec(config.max_arms, config.tau, config.s, config.c, config.constraint,
                   problem_dim(config, dataset));
  validate_spec(spec, *env);
  validate_model(*model, *env);
  EnvironmentSampler sampler(std::move(env), config.seed);
  return Problem{std::move(spec), std::move(sampler), std::move(*model), std::move(dataset)};
}

BackendSpec build_backend(const ExperimentConfig& config, const Problem& problem) {
  const PolicyConfig& p = config.policy;
  const double inverse_horizon = 1.0 / config.horizon;
  if (p.name == "coaf-linear") {
    return LinearBackendSpec{p.lambda, p.delta.value_or(std::min(1.0, inverse_horizon))};
  }
  if (p.name == "coaf-finite") {
    FiniteBackendSpec spec;
    spec.delta = p.delta.value_or(std::min(1.0 / std::sqrt(std::exp(1.0)), inverse_horizon));
    spec.alpha = p.alpha.value_or(inverse_horizon);
    if (p.class_csv.empty()) {
      RewardModel model = problem.model;
      spec.members.push_back([model](const ArmContext& x) { return model.mean(x); });
    } else {
      spec.members = load_finite_class(p.class_csv, problem.dataset ? &problem.dataset->index : nullptr);
    }
    return spec;
  }
  throw std::invalid_argument("policy '" + p.name + "' has no confidence backend");
}

Trace run_replication(const ExperimentConfig& config, const Problem& problem, std::size_t replication) {
  const std::uint64_t seed = config.seed + replication;
  if (config.policy.name == "oaf") {
    return run_oaf(problem.spec, problem.sampler, problem.model, config.horizon, seed);
  }
  return run_coaf(problem.spec, problem.sampler, problem.model, build_backend(config, problem),
                  config.horizon, config.policy.xi, seed);
}

void for_each_replication(std::size_t count, std::size_t threads,
                          const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < count; r = next++) {
        try {
          fn(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads,
                                std::optional<GammaStarResult> gamma_star) {
  const auto started = std::chrono::steady_clock::now();
  const Problem problem = build_problem(config);
  if (config.policy.name != "oaf" && config.policy.name != "coaf-linear" &&
      config.policy.name != "coaf-finite") {
    throw std::invalid_argument("unknown policy '" + config.policy.name + "'");
  }

  ExperimentResult result;
  result.gamma_star = gamma_star ? *gamma_star
                                 : solve_gamma_star(problem.spec, problem.sampler, problem.model,
                                                    config.gamma_iterations,
                                                    derive_seed(config.environment.catalog_seed, kGammaSolverStream));

  std::vector<double> grid = uniform_grid(config.horizon, config.grid_points);
  std::vector<std::vector<double>> regret(config.replications);
  for_each_replication(config.replications, threads, [&](std::size_t r) {
    regret[r] = regret_on_grid(run_replication(config, problem, r), result.gamma_star.gamma, grid);
  });
  result.curve = aggregate_regret(std::move(grid), std::move(regret));
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_regret_csv(const RegretCurve& curve, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "t,mean,q05,q95,n_replications\n";
  if (!curve.replications.empty()) {
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
      out << detail::format_double(curve.grid[k]) << ',' << detail::format_double(curve.mean[k]) << ','
          << detail::format_double(curve.q05[k]) << ',' << detail::format_double(curve.q95[k]) << ','
          << curve.replication_count() << '\n';
    }
  }
  write_file(path, out.str());
}

void emit_report(const RegretCurve& curve, const ExperimentConfig& config,
                 const GammaStarResult& gamma_star, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  write_regret_csv(curve, dir / "regret.csv");

  std::ostringstream reps;
  reps << 't';
  for (std::size_t r = 0; r < curve.replication_count(); ++r) reps << ",r" << r;
  reps << '\n';
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    reps << detail::format_double(curve.grid[k]);
    for (const auto& rep : curve.replications) reps << ',' << detail::format_double(rep[k]);
    reps << '\n';
  }
  write_file(dir / "replications.csv", reps.str());

  nlohmann::json run{
      {"config", to_json(config)},
      {"gamma_star", gamma_star.gamma},
      {"gamma_residual", gamma_star.residual},
      {"gamma_iterations", gamma_star.iterations},
      {"n_replications", curve.replication_count()},
      {"grid_points", curve.grid.size()},
  };
  write_file(dir / "run.json", run.dump(2) + "\n");
}

void emit_timing(double wall_seconds, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_file(dir / "timing.json", nlohmann::json{{"wall_seconds", wall_seconds}}.dump(2) + "\n");
}

RegretCurve load_replications(const std::filesystem::path& dir) {
  const auto path = dir / "replications.csv";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(1, "missing header");
  std::size_t reps = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  std::vector<double> grid;
  std::vector<std::vector<double>> values(reps);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      const auto v = detail::parse_double(cell);
      if (!v) throw SchemaError(lineno, "malformed value '" + cell + "'");
      if (col == 0) {
        grid.push_back(*v);
      } else if (col <= reps) {
        values[col - 1].push_back(*v);
      }
      ++col;
    }
    if (col != reps + 1) throw SchemaError(lineno, "wrong field count");
  }
  return aggregate_regret(std::move(grid), std::move(values));
}

}  // namespace reqbandit
