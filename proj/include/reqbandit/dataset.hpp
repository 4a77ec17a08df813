#pragma once

// Featurized arm catalogs on disk.
//
// features CSV:  arm_id,f1,...,fd,mean_reward
// ratings CSV:   arm_id,rating        (optional; one row per stored rating)
// class CSV:     context_id,psi_0,...,psi_{k-1}   (tabulated finite class)
//
// Arm ids are arbitrary tokens; each arm's ArmContext::id is its row position
// in the features file.

#include "reqbandit/confidence.hpp"
#include "reqbandit/env.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace reqbandit {

struct FeatureDataset {
  std::vector<std::string> arm_ids;
  std::unordered_map<std::string, std::size_t> index;  // arm id -> row position
  std::shared_ptr<const std::vector<ArmContext>> catalog;
  std::shared_ptr<const std::vector<double>> means;
  // Empty when no ratings file was supplied.
  std::shared_ptr<const std::vector<std::vector<double>>> ratings;

  std::size_t size() const { return catalog ? catalog->size() : 0; }
  std::size_t dim() const;
};

FeatureDataset load_feature_dataset(const std::filesystem::path& features,
                                    const std::optional<std::filesystem::path>& ratings = std::nullopt);

// psi* = stored mean; rewards are stored ratings when present, otherwise
// mean + N(0, 1).
RewardModel dataset_reward_model(const FeatureDataset& data);

// Catalog of `size` contexts uniform in the unit ball of R^dim and a
// parameter theta* uniform on the unit sphere; means are <theta*, x>.
struct LinearCatalog {
  std::shared_ptr<const std::vector<ArmContext>> catalog;
  Eigen::VectorXd theta;
};
LinearCatalog make_linear_catalog(std::size_t size, std::size_t dim, std::uint64_t seed);

void write_feature_dataset(const std::filesystem::path& path, const std::vector<ArmContext>& catalog,
                           const std::vector<double>& means);

// Members psi_j(x) = table value at x.id. Context ids are looked up in
// `index` when given, otherwise parsed as row positions.
std::vector<Regressor> load_finite_class(
    const std::filesystem::path& path,
    const std::unordered_map<std::string, std::size_t>* index = nullptr);

}  // namespace reqbandit
