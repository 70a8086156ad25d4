#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lot/classify.hpp"
#include "lot/datasets.hpp"
#include "lot/ot.hpp"

namespace lot {

struct MnistProtocol {
  std::array<int, 2> digits{1, 2};  // first digit is class +1
  std::vector<int> train_sizes{40, 60, 80, 100};  // per class
  int test_per_class = 100;
  int trials = 20;
  double shrinkage = 1e-3;
  double mass_floor = 0.0;
  double scale_min = 0.4;
  double scale_max = 1.2;
  std::uint64_t seed = 0;
  GaussianReference reference;
  SolverConfig solver;
  // Trial whose LDA coordinates are kept for scatter plots.
  int scatter_trial = 0;
};

struct MnistScatter {
  int train_size = 0;
  std::vector<std::array<double, 2>> points;  // test rows in LDA coordinates
  std::vector<int> labels;
};

struct MnistResult {
  std::vector<int> train_sizes;
  std::vector<EvalReport> lot;  // one per train size
  std::vector<EvalReport> pca;
  std::size_t reference_size = 0;
  Eigen::Index pca_dim = 0;
  std::vector<MnistScatter> scatters;
};

// Per trial: draws max(train_sizes) training and test_per_class test images
// per class without replacement, augments every image with its own derived
// seed, embeds all of them against the Gaussian reference and fits LDA on
// the first N training images per class. The baseline runs the same LDA on
// PCA-reduced pixels with the dimension clipped to min(2|supp sigma|, 2N).
// Throws InvalidArgument when a class has too few images.
MnistResult run_mnist(const std::vector<ImageGrid>& pool, const MnistProtocol& protocol);

}  // namespace lot
