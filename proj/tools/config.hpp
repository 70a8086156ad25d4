#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lot/datasets.hpp"
#include "lot/families.hpp"
#include "lot/io.hpp"
#include "lot/mnist.hpp"
#include "lot/suites.hpp"

namespace lot::cli {

// Raised for anything wrong with the configuration document itself.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedMeasure {
  std::string id;
  DiscreteMeasure measure;
};

struct FamilyConfig {
  std::string name;
  FamilySpec spec;
};

struct VerifyConfig {
  std::size_t oracle_instances = 200;
  std::size_t instances = 100;
  std::size_t khat_cases = 50;
  GapSuiteSpec gap;
  bool separability = true;
  SeparabilitySpec separation;
  bool inject_crossed_plan = false;
};

struct ExperimentConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  ReferenceSpec reference = synthetic_reference();
  std::optional<DiscreteMeasure> reference_measure;  // overrides `reference`
  SolverConfig solver;
  std::vector<NamedMeasure> measures;
  std::vector<FamilyConfig> families;
  std::size_t exact_cap = 60;
  std::optional<std::filesystem::path> mnist_images;
  std::optional<std::filesystem::path> mnist_labels;
  MnistProtocol mnist;
  VerifyConfig verify;

  DiscreteMeasure reference_support() const;
};

// Parses the JSON document. Family seeds are derived from the global seed
// and the family's own "seed" field (default: its index), so --seed moves
// every random choice. Throws ConfigError, or lot::Error for unreadable
// measure files.
ExperimentConfig parse_config(const Json& doc, const std::filesystem::path& base_dir, std::optional<std::uint64_t> seed);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed);

}  // namespace lot::cli
