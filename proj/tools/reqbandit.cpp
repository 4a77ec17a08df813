#include "reqbandit/config.hpp"
#include "reqbandit/dataset.hpp"
#include "reqbandit/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

using namespace reqbandit;

namespace {

ExperimentConfig config_or_reference(const std::string& path) {
  return path.empty() ? ExperimentConfig::reference() : load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"request-cost contextual bandit simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string policy;
  std::optional<std::size_t> iterations;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<std::size_t> replications;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());

  auto* rate = app.add_subcommand("rate", "solve for the optimal average reward");
  rate->add_option("--config", config_path, "config file (JSON)");
  rate->add_option("--iterations", iterations, "stochastic-approximation iterations");
  rate->add_option("--seed", seed, "solver seed");

  auto* simulate = app.add_subcommand("simulate", "run seeded replications and write regret files");
  simulate->add_option("--config", config_path, "config file (JSON)");
  simulate->add_option("--policy", policy, "oaf | coaf-linear | coaf-finite");
  simulate->add_option("--horizon", horizon, "time horizon T");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--iterations", iterations, "iterations for the optimal-rate solver");
  simulate->add_option("--replications", replications, "number of replications");
  simulate->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--output", output, "output directory");

  auto* report = app.add_subcommand("report", "re-aggregate replications.csv into regret.csv");
  report->add_option("--output", output, "run directory")->required();

  auto* show = app.add_subcommand("config", "print the effective config as JSON");
  show->add_option("--config", config_path, "config file (JSON)");

  std::size_t catalog_size = 3000;
  std::size_t catalog_dim = 5;
  std::uint64_t catalog_seed = 7;
  auto* catalog = app.add_subcommand("catalog", "write a synthetic linear catalog as a features CSV");
  catalog->add_option("--size", catalog_size);
  catalog->add_option("--dim", catalog_dim);
  catalog->add_option("--seed", catalog_seed);
  catalog->add_option("--output", output, "features CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rate) {
      ExperimentConfig config = config_or_reference(config_path);
      const Problem problem = build_problem(config);
      const GammaStarResult g =
          solve_gamma_star(problem.spec, problem.sampler, problem.model,
                           iterations.value_or(config.gamma_iterations), seed.value_or(config.seed));
      nlohmann::json out{{"gamma_star", g.gamma}, {"residual", g.residual}, {"iterations", g.iterations}};
      std::cout << out.dump(2) << '\n';
    } else if (*simulate) {
      ExperimentConfig config = config_or_reference(config_path);
      if (!policy.empty()) config.policy.name = policy;
      if (horizon) config.horizon = *horizon;
      if (seed) config.seed = *seed;
      if (iterations) config.gamma_iterations = *iterations;
      if (replications) config.replications = *replications;
      if (!output.empty()) config.output = output;
      const ExperimentResult result = run_experiment(config, threads);
      emit_report(result.curve, config, result.gamma_star, config.output);
      emit_timing(result.wall_seconds, config.output);
      if (!result.curve.mean.empty()) {
        std::cout << "gamma_star " << result.gamma_star.gamma << "  mean R(T) " << result.curve.mean.back()
                  << "  [" << result.curve.q05.back() << ", " << result.curve.q95.back() << "]  "
                  << result.wall_seconds << " s\n";
      }
    } else if (*report) {
      const RegretCurve curve = load_replications(output);
      write_regret_csv(curve, std::filesystem::path(output) / "regret.csv");
      std::cout << curve.grid.size() << " grid points, " << curve.replication_count() << " replications\n";
    } else if (*show) {
      std::cout << dump_config(config_or_reference(config_path)) << '\n';
    } else if (*catalog) {
      const LinearCatalog cat = make_linear_catalog(catalog_size, catalog_dim, catalog_seed);
      std::vector<double> means;
      means.reserve(cat.catalog->size());
      for (const auto& x : *cat.catalog) means.push_back(cat.theta.dot(x.features));
      write_feature_dataset(output, *cat.catalog, means);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
