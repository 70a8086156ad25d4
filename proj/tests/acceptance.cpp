// Runs every acceptance criterion once with the default seeds and prints one
// PASS/FAIL line per criterion. Exit status 1 if any criterion fails.
#include <cstdio>
#include <functional>
#include <string>

#include <spdlog/spdlog.h>

#include "lot/mnist.hpp"
#include "lot/random.hpp"
#include "lot/suites.hpp"

namespace {

using lot::Json;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome from_suite(const lot::SuiteResult& r, std::initializer_list<const char*> keys) {
  std::string detail;
  for (const char* k : keys) {
    if (!detail.empty()) detail += ", ";
    const Json& v = r.metrics.at(k);
    detail += std::string(k) + "=" + (v.is_number() ? num(v.get<double>()) : v.dump());
  }
  return {r.passed, detail};
}

Outcome mnist_criterion() {
  const auto pool = lot::load_idx(LOT_DATA_DIR "/mnist12-images-idx3-ubyte", LOT_DATA_DIR "/mnist12-labels-idx1-ubyte");
  lot::MnistProtocol p;
  p.shrinkage = 0.1;
  const lot::MnistResult r = lot::run_mnist(pool, p);
  bool decreasing = true;
  std::string curve;
  for (std::size_t s = 0; s < r.train_sizes.size(); ++s) {
    if (s > 0 && !(r.lot[s].mean < r.lot[s - 1].mean)) decreasing = false;
    curve += (s ? " " : "") + std::to_string(r.train_sizes[s]) + ":" + num(r.lot[s].mean);
  }
  const double at100 = r.lot.back().mean;
  const double at40 = r.lot.front().mean;
  const double pca100 = r.pca.back().mean;
  const bool ok = at100 <= 0.10 && at40 <= 0.35 && decreasing && at100 < pca100;
  return {ok, "lot " + curve + ", pca@100=" + num(pca100) + ", strictly_decreasing=" + (decreasing ? "true" : "false")};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::uint64_t seed = 0;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle equivalence",
       [&] {
         return from_suite(lot::oracle_suite(200, lot::derive_seed(seed, 1)),
                           {"max_abs_error", "max_duality_gap", "max_dual_infeasibility"});
       }},
      {"2 one-dimensional isometry",
       [&] { return from_suite(lot::isometry_1d_suite(100, lot::derive_seed(seed, 2)), {"max_abs_deviation"}); }},
      {"3 shift/scale isometry",
       [&] {
         return from_suite(lot::shift_scale_suite(100, lot::derive_seed(seed, 3)),
                           {"max_abs_deviation", "max_compatibility_defect"});
       }},
      {"4 sandwich",
       [&] {
         return from_suite(lot::sandwich_suite(100, lot::derive_seed(seed, 4)),
                           {"min_lower_slack", "min_upper_slack_over_w2"});
       }},
      {"5 gap curve",
       [&] {
         lot::GapSuiteSpec spec;
         spec.seed = lot::derive_seed(seed, 100);
         return from_suite(lot::gap_curve_suite(spec),
                           {"mean_gap_at_zero", "mean_strictly_increasing", "max_gap_exponent"});
       }},
      {"6 K-hat scaling",
       [&] {
         return from_suite(lot::khat_suite(50, lot::derive_seed(seed, 6)),
                           {"max_scaling_deviation", "max_shift_deviation"});
       }},
      {"7 separability",
       [&] {
         lot::SeparabilitySpec spec;
         spec.seed = lot::derive_seed(seed, 101);
         return from_suite(lot::separability_suite(spec),
                           {"min_cross_w2", "delta", "margin", "separable_at_eps_zero", "margin_at_eps_zero"});
       }},
      {"8 mnist", mnist_criterion},
      {"9 timing",
       [&] {
         return from_suite(lot::timing_suite(40, lot::derive_seed(seed, 9)),
                           {"embed_seconds", "lot_distance_seconds", "exact_seconds"});
       }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
