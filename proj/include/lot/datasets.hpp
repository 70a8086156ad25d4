#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lot/measures.hpp"

namespace lot {

// Row-major grayscale image; pixel (row r, col c) sits at point (c, r).
struct ImageGrid {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
  int label = 0;

  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r * width + c)]; }
  double& at(int r, int c) { return pixels[static_cast<std::size_t>(r * width + c)]; }
  double total() const;
};

// IDX image/label files (magic 0x00000803 / 0x00000801, big-endian sizes).
// Pixel bytes map to [0, 1]. Throws Io, BadMagic, TruncatedFile or
// CountMismatch.
std::vector<ImageGrid> load_idx(const std::string& images_path, const std::string& labels_path);

// Atoms at pixels brighter than mass_floor with weights proportional to
// intensity. Throws EmptySupport for an image with no such pixel.
DiscreteMeasure image_to_measure(const ImageGrid& img, double mass_floor = 0.0);

struct AugmentSpec {
  double scale_min = 0.4;
  double scale_max = 1.2;
  std::uint64_t seed = 0;
  // Multiply intensities by 1/scale^2 so the total mass is unchanged.
  bool preserve_mass = true;
};

// Resizes the digit's bounding box by `scale` (bilinear, antialiased when
// shrinking) and pastes it with its top-left corner at (top, left). Throws
// InvalidArgument if the result does not fit in the frame.
ImageGrid rescale_and_place(const ImageGrid& img, double scale, int top, int left, bool preserve_mass = true);

// Uniform random scale, clamped so the digit fits, then a uniform random
// in-frame integer position.
ImageGrid augment(const ImageGrid& img, const AugmentSpec& spec);

struct GaussianReference {
  std::vector<double> center{13.5, 13.5};
  double std = 3.0;
  double truncation = 4.6;  // radius in grid units
  int grid_width = 28;
  int grid_height = 28;
};

struct UniformGridReference {
  std::vector<double> lo{0.0, 0.0};
  std::vector<double> hi{1.0, 1.0};
  std::vector<int> resolution{5, 5};  // atoms per axis, placed at cell centers
};

using ReferenceSpec = std::variant<GaussianReference, UniformGridReference>;

// Throws EmptySupport when truncation leaves no grid point.
DiscreteMeasure select_reference_support(const ReferenceSpec& spec);

}  // namespace lot
