#include "reqbandit/dataset.hpp"

#include "numfmt.hpp"
#include "reqbandit/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace reqbandit {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    fields.push_back(detail::trim(line.substr(begin, comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return fields;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

double number_or_throw(std::string_view field, std::size_t line, const char* what) {
  const auto v = detail::parse_double(field);
  if (!v || !std::isfinite(*v)) {
    throw SchemaError(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
  }
  return *v;
}

}  // namespace

std::size_t FeatureDataset::dim() const {
  if (!catalog || catalog->empty()) return 0;
  return static_cast<std::size_t>(catalog->front().features.size());
}

FeatureDataset load_feature_dataset(const std::filesystem::path& features,
                                    const std::optional<std::filesystem::path>& ratings) {
  std::ifstream in = open_or_throw(features);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw SchemaError(1, "missing header");
  ++lineno;
  const auto header = split(line);
  if (header.size() < 3 || header.front() != "arm_id" || header.back() != "mean_reward") {
    throw SchemaError(lineno, "expected header arm_id,f1..fd,mean_reward");
  }
  const std::size_t dim = header.size() - 2;

  FeatureDataset data;
  auto catalog = std::make_shared<std::vector<ArmContext>>();
  auto means = std::make_shared<std::vector<double>>();
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw SchemaError(lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    std::string id(fields.front());
    if (id.empty()) throw SchemaError(lineno, "empty arm_id");
    if (!data.index.emplace(id, catalog->size()).second) {
      throw SchemaError(lineno, "duplicate arm_id '" + id + "'");
    }
    ArmContext arm{catalog->size(), Eigen::VectorXd(static_cast<Eigen::Index>(dim))};
    for (std::size_t k = 0; k < dim; ++k) {
      arm.features(static_cast<Eigen::Index>(k)) = number_or_throw(fields[k + 1], lineno, "feature");
    }
    means->push_back(number_or_throw(fields.back(), lineno, "mean_reward"));
    catalog->push_back(std::move(arm));
    data.arm_ids.push_back(std::move(id));
  }
  if (catalog->empty()) throw EmptyCatalog();
  data.catalog = std::move(catalog);
  data.means = std::move(means);

  if (ratings) {
    auto table = std::make_shared<std::vector<std::vector<double>>>(data.size());
    std::ifstream rin = open_or_throw(*ratings);
    std::size_t rline = 0;
    if (!std::getline(rin, line)) throw SchemaError(1, "missing ratings header");
    ++rline;
    const auto rheader = split(line);
    if (rheader.size() != 2 || rheader[0] != "arm_id" || rheader[1] != "rating") {
      throw SchemaError(rline, "expected header arm_id,rating");
    }
    while (std::getline(rin, line)) {
      ++rline;
      if (detail::trim(line).empty()) continue;
      const auto fields = split(line);
      if (fields.size() != 2) throw SchemaError(rline, "expected 2 fields");
      const auto it = data.index.find(std::string(fields[0]));
      if (it == data.index.end()) {
        throw SchemaError(rline, "unknown arm_id '" + std::string(fields[0]) + "'");
      }
      (*table)[it->second].push_back(number_or_throw(fields[1], rline, "rating"));
    }
    for (std::size_t i = 0; i < table->size(); ++i) {
      if ((*table)[i].empty()) {
        throw SchemaError(i + 2, "arm '" + data.arm_ids[i] + "' has no ratings");
      }
    }
    data.ratings = std::move(table);
  }
  return data;
}

RewardModel dataset_reward_model(const FeatureDataset& data) {
  if (data.ratings) return RewardModel(TabulatedMean{data.means}, RatingDraw{data.ratings});
  return RewardModel(TabulatedMean{data.means}, GaussianNoise{1.0});
}

LinearCatalog make_linear_catalog(std::size_t size, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  LinearCatalog out;
  out.theta = sample_unit_ball(dim, rng);
  out.theta /= out.theta.norm();
  auto catalog = std::make_shared<std::vector<ArmContext>>();
  catalog->reserve(size);
  for (std::size_t i = 0; i < size; ++i) catalog->push_back({i, sample_unit_ball(dim, rng)});
  out.catalog = std::move(catalog);
  return out;
}

void write_feature_dataset(const std::filesystem::path& path, const std::vector<ArmContext>& catalog,
                           const std::vector<double>& means) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::size_t dim = catalog.empty() ? 0 : static_cast<std::size_t>(catalog.front().features.size());
  out << "arm_id";
  for (std::size_t k = 1; k <= dim; ++k) out << ",f" << k;
  out << ",mean_reward\n";
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out << catalog[i].id;
    for (Eigen::Index k = 0; k < catalog[i].features.size(); ++k) {
      out << ',' << detail::format_double(catalog[i].features(k));
    }
    out << ',' << detail::format_double(means.at(i)) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Regressor> load_finite_class(const std::filesystem::path& path,
                                         const std::unordered_map<std::string, std::size_t>* index) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw SchemaError(1, "missing header");
  ++lineno;
  const auto header = split(line);
  if (header.size() < 2 || header.front() != "context_id") {
    throw SchemaError(lineno, "expected header context_id,psi_0..psi_k");
  }
  const std::size_t members = header.size() - 1;
  const double missing = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> tables(members);
  std::size_t contexts = index ? index->size() : 0;
  for (auto& t : tables) t.assign(contexts, missing);

  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) throw SchemaError(lineno, "wrong field count");
    std::size_t row = 0;
    if (index) {
      const auto it = index->find(std::string(fields[0]));
      if (it == index->end()) throw SchemaError(lineno, "unknown context_id '" + std::string(fields[0]) + "'");
      row = it->second;
    } else {
      const double id = number_or_throw(fields[0], lineno, "context_id");
      if (id < 0 || id != std::floor(id)) throw SchemaError(lineno, "context_id must be a row index");
      row = static_cast<std::size_t>(id);
      if (row >= contexts) {
        contexts = row + 1;
        for (auto& t : tables) t.resize(contexts, missing);
      }
    }
    for (std::size_t j = 0; j < members; ++j) tables[j][row] = number_or_throw(fields[j + 1], lineno, "psi value");
  }
  if (contexts == 0) throw EmptyCatalog();

  std::vector<Regressor> out;
  out.reserve(members);
  for (auto& t : tables) {
    for (std::size_t row = 0; row < t.size(); ++row) {
      if (std::isnan(t[row])) throw SchemaError(lineno, "context " + std::to_string(row) + " not tabulated");
    }
    out.push_back(tabulated_regressor(std::make_shared<const std::vector<double>>(std::move(t))));
  }
  return out;
}

}  // namespace reqbandit
