#include "lot/mnist.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "lot/embed.hpp"
#include "lot/parallel.hpp"
#include "lot/random.hpp"

namespace lot {

namespace {

struct TrialData {
  // Rows ordered class +1 then class -1, each block train (max N) then test.
  Eigen::MatrixXd lot_features;
  Eigen::MatrixXd pixels;
};

FeatureMatrix pick(const Eigen::MatrixXd& rows, int per_class_block, int offset, int count) {
  FeatureMatrix X;
  X.rows.resize(2 * count, rows.cols());
  X.labels.resize(static_cast<std::size_t>(2 * count));
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < count; ++i) {
      X.rows.row(c * count + i) = rows.row(c * per_class_block + offset + i);
      X.labels[static_cast<std::size_t>(c * count + i)] = c == 0 ? 1 : -1;
    }
  }
  return X;
}

}  // namespace

MnistResult run_mnist(const std::vector<ImageGrid>& pool, const MnistProtocol& p) {
  if (p.train_sizes.empty() || p.trials < 1 || p.test_per_class < 1) {
    throw Error(ErrorCode::InvalidArgument, "mnist protocol needs train sizes, trials and a test set");
  }
  const int max_train = *std::max_element(p.train_sizes.begin(), p.train_sizes.end());
  const int block = max_train + p.test_per_class;
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    for (int c = 0; c < 2; ++c) {
      if (pool[k].label == p.digits[static_cast<std::size_t>(c)]) by_class[static_cast<std::size_t>(c)].push_back(k);
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (static_cast<int>(by_class[static_cast<std::size_t>(c)].size()) < block) {
      throw Error(ErrorCode::InvalidArgument, "digit " + std::to_string(p.digits[static_cast<std::size_t>(c)]) +
                                                  " has fewer than " + std::to_string(block) + " images");
    }
  }

  const DiscreteMeasure sigma = select_reference_support(p.reference);
  MnistResult result;
  result.train_sizes = p.train_sizes;
  result.reference_size = static_cast<std::size_t>(sigma.size());
  result.lot.resize(p.train_sizes.size());
  result.pca.resize(p.train_sizes.size());

  for (int t = 0; t < p.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(p.seed, static_cast<std::uint64_t>(t));
    Rng rng(trial_seed);
    std::vector<std::size_t> chosen;
    for (int c = 0; c < 2; ++c) {
      auto ids = by_class[static_cast<std::size_t>(c)];
      rng.shuffle(ids);
      chosen.insert(chosen.end(), ids.begin(), ids.begin() + block);
    }

    const Eigen::Index pixels = static_cast<Eigen::Index>(pool[chosen[0]].pixels.size());
    TrialData data{Eigen::MatrixXd(static_cast<Eigen::Index>(chosen.size()), 2 * sigma.size()),
                   Eigen::MatrixXd(static_cast<Eigen::Index>(chosen.size()), pixels)};
    parallel_for(chosen.size(), [&](std::size_t k) {
      AugmentSpec spec{p.scale_min, p.scale_max, derive_seed(trial_seed, k + 1), true};
      const ImageGrid img = augment(pool[chosen[k]], spec);
      const auto e = embed(sigma, image_to_measure(img, p.mass_floor), p.solver);
      data.lot_features.row(static_cast<Eigen::Index>(k)) = e.flattened().transpose();
      data.pixels.row(static_cast<Eigen::Index>(k)) =
          Eigen::Map<const Eigen::RowVectorXd>(img.pixels.data(), pixels);
    });

    const FeatureMatrix lot_test = pick(data.lot_features, block, max_train, p.test_per_class);
    const FeatureMatrix pix_test = pick(data.pixels, block, max_train, p.test_per_class);
    for (std::size_t s = 0; s < p.train_sizes.size(); ++s) {
      const int n = p.train_sizes[s];
      const FeatureMatrix lot_train = pick(data.lot_features, block, 0, n);
      const LinearModel lot_model = lda_fit(lot_train, p.shrinkage);
      result.lot[s].per_trial.push_back(error_rate(lot_model, lot_test));

      const FeatureMatrix pix_train = pick(data.pixels, block, 0, n);
      const Eigen::Index k = std::min<Eigen::Index>(2 * sigma.size(), pix_train.size());
      result.pca_dim = k;
      const PcaModel pca = pca_fit(pix_train, k);
      const LinearModel pca_model = lda_fit(pca.project(pix_train), p.shrinkage);
      result.pca[s].per_trial.push_back(error_rate(pca_model, pca.project(pix_test)));

      if (t == p.scatter_trial) {
        MnistScatter sc;
        sc.train_size = n;
        sc.points = lda_scatter_coordinates(lot_model, lot_test);
        sc.labels = lot_test.labels;
        result.scatters.push_back(std::move(sc));
      }
    }
    spdlog::info("mnist trial {}/{}: lot error at N={} is {:.3f}", t + 1, p.trials, p.train_sizes.back(),
                 result.lot.back().per_trial.back());
  }
  for (std::size_t s = 0; s < p.train_sizes.size(); ++s) {
    for (auto* rep : {&result.lot[s], &result.pca[s]}) {
      aggregate(*rep);
      rep->test_error = rep->mean;
    }
  }
  return result;
}

}  // namespace lot
