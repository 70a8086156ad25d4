#include "lot/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>

#include <spdlog/spdlog.h>

#include "lot/random.hpp"

namespace lot {

double ImageGrid::total() const {
  double t = 0.0;
  for (double p : pixels) t += p;
  return t;
}

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset, const std::string& path) {
  if (buf.size() < offset + 4) throw Error(ErrorCode::TruncatedFile, path + ": header truncated");
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

}  // namespace

std::vector<ImageGrid> load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);
  if (read_be32(images, 0, images_path) != 0x00000803u) throw Error(ErrorCode::BadMagic, images_path);
  if (read_be32(labels, 0, labels_path) != 0x00000801u) throw Error(ErrorCode::BadMagic, labels_path);
  const std::size_t count = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  const std::size_t label_count = read_be32(labels, 4, labels_path);
  if (count != label_count) throw Error(ErrorCode::CountMismatch, "image and label counts differ");
  const std::size_t pixels = rows * cols;
  if (images.size() < 16 + count * pixels) throw Error(ErrorCode::TruncatedFile, images_path);
  if (labels.size() < 8 + count) throw Error(ErrorCode::TruncatedFile, labels_path);

  std::vector<ImageGrid> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    ImageGrid& img = out[k];
    img.width = static_cast<int>(cols);
    img.height = static_cast<int>(rows);
    img.label = labels[8 + k];
    img.pixels.resize(pixels);
    const unsigned char* src = images.data() + 16 + k * pixels;
    for (std::size_t p = 0; p < pixels; ++p) img.pixels[p] = src[p] / 255.0;
  }
  return out;
}

DiscreteMeasure image_to_measure(const ImageGrid& img, double mass_floor) {
  if (mass_floor < 0.0) throw Error(ErrorCode::InvalidArgument, "mass_floor must be nonnegative");
  std::vector<std::array<double, 3>> atoms;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const double v = img.at(r, c);
      if (v > mass_floor) atoms.push_back({static_cast<double>(c), static_cast<double>(r), v});
    }
  }
  if (atoms.empty()) throw Error(ErrorCode::EmptySupport, "image has no pixel above the mass floor");
  Points pts(static_cast<Eigen::Index>(atoms.size()), 2);
  Vector w(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    pts(static_cast<Eigen::Index>(k), 0) = atoms[k][0];
    pts(static_cast<Eigen::Index>(k), 1) = atoms[k][1];
    w(static_cast<Eigen::Index>(k)) = atoms[k][2];
  }
  return DiscreteMeasure::make(std::move(pts), std::move(w));
}

namespace {

struct Box {
  int top, left, height, width;
};

Box bounding_box(const ImageGrid& img) {
  int top = img.height, bottom = -1, left = img.width, right = -1;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (img.at(r, c) > 0.0) {
        top = std::min(top, r);
        bottom = std::max(bottom, r);
        left = std::min(left, c);
        right = std::max(right, c);
      }
    }
  }
  if (bottom < 0) throw Error(ErrorCode::EmptySupport, "image is blank");
  return {top, left, bottom - top + 1, right - left + 1};
}

int scaled_extent(int n, double scale) { return std::max(1, static_cast<int>(std::lround(n * scale))); }

// Weights of a separable triangle kernel. Input coordinate of output pixel o
// is (o + 0.5) / scale - 0.5; when shrinking the kernel widens by 1 / scale.
// Out-of-range taps read zero.
std::vector<std::vector<std::pair<int, double>>> resize_weights(int in, int out, double scale) {
  const double stretch = scale < 1.0 ? scale : 1.0;
  const double support = 1.0 / stretch;
  std::vector<std::vector<std::pair<int, double>>> taps(static_cast<std::size_t>(out));
  for (int o = 0; o < out; ++o) {
    const double u = (o + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::floor(u - support));
    const int last = static_cast<int>(std::ceil(u + support));
    double total = 0.0;
    std::vector<std::pair<int, double>> row;
    for (int k = first; k <= last; ++k) {
      const double w = std::max(0.0, 1.0 - std::abs((u - k) * stretch));
      if (w <= 0.0) continue;
      total += w;
      if (k >= 0 && k < in) row.emplace_back(k, w);
    }
    for (auto& [k, w] : row) w /= total;
    taps[static_cast<std::size_t>(o)] = std::move(row);
  }
  return taps;
}

}  // namespace

ImageGrid rescale_and_place(const ImageGrid& img, double scale, int top, int left, bool preserve_mass) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  const Box box = bounding_box(img);
  const int out_h = scaled_extent(box.height, scale);
  const int out_w = scaled_extent(box.width, scale);
  if (top < 0 || left < 0 || top + out_h > img.height || left + out_w > img.width) {
    throw Error(ErrorCode::InvalidArgument, "scaled digit does not fit the frame at that position");
  }
  const auto row_taps = resize_weights(box.height, out_h, scale);
  const auto col_taps = resize_weights(box.width, out_w, scale);

  // Columns first, then rows.
  std::vector<double> tmp(static_cast<std::size_t>(box.height * out_w), 0.0);
  for (int r = 0; r < box.height; ++r) {
    for (int c = 0; c < out_w; ++c) {
      double v = 0.0;
      for (const auto& [k, w] : col_taps[static_cast<std::size_t>(c)]) v += w * img.at(box.top + r, box.left + k);
      tmp[static_cast<std::size_t>(r * out_w + c)] = v;
    }
  }
  ImageGrid out{img.width, img.height, std::vector<double>(img.pixels.size(), 0.0), img.label};
  for (int r = 0; r < out_h; ++r) {
    for (int c = 0; c < out_w; ++c) {
      double v = 0.0;
      for (const auto& [k, w] : row_taps[static_cast<std::size_t>(r)]) v += w * tmp[static_cast<std::size_t>(k * out_w + c)];
      out.at(top + r, left + c) = v;
    }
  }
  // The kernel leaks mass past the output box on small digits, so a plain
  // 1/scale^2 gain undershoots. Rescale to the measured total instead.
  const double out_total = out.total();
  if (preserve_mass && scale != 1.0 && out_total > 0.0) {
    const double gain = img.total() / out_total;
    for (double& v : out.pixels) v *= gain;
  }
  return out;
}

ImageGrid augment(const ImageGrid& img, const AugmentSpec& spec) {
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < scale_min <= scale_max");
  }
  Rng rng(spec.seed);
  const Box box = bounding_box(img);
  double scale = rng.uniform(spec.scale_min, spec.scale_max);
  const double fit = std::min(static_cast<double>(img.height) / box.height, static_cast<double>(img.width) / box.width);
  if (scale > fit) {
    spdlog::debug("clamping augmentation scale {} to {}", scale, fit);
    scale = fit;
  }
  const int out_h = std::min(img.height, scaled_extent(box.height, scale));
  const int out_w = std::min(img.width, scaled_extent(box.width, scale));
  const int top = static_cast<int>(rng.index(static_cast<std::size_t>(img.height - out_h + 1)));
  const int left = static_cast<int>(rng.index(static_cast<std::size_t>(img.width - out_w + 1)));
  return rescale_and_place(img, scale, top, left, spec.preserve_mass);
}

DiscreteMeasure select_reference_support(const ReferenceSpec& spec) {
  if (const auto* g = std::get_if<GaussianReference>(&spec)) {
    if (g->center.size() != 2) throw Error(ErrorCode::DimensionMismatch, "Gaussian reference lives on a 2D grid");
    if (!(g->std > 0.0)) throw Error(ErrorCode::InvalidArgument, "std must be positive");
    std::vector<std::array<double, 3>> atoms;
    for (int r = 0; r < g->grid_height; ++r) {
      for (int c = 0; c < g->grid_width; ++c) {
        const double dx = c - g->center[0];
        const double dy = r - g->center[1];
        const double d2 = dx * dx + dy * dy;
        if (d2 <= g->truncation * g->truncation && g->truncation > 0.0) {
          atoms.push_back({static_cast<double>(c), static_cast<double>(r), std::exp(-d2 / (2.0 * g->std * g->std))});
        }
      }
    }
    if (atoms.empty()) throw Error(ErrorCode::EmptySupport, "no grid point within the truncation radius");
    Points pts(static_cast<Eigen::Index>(atoms.size()), 2);
    Vector w(static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      pts.row(static_cast<Eigen::Index>(k)) << atoms[k][0], atoms[k][1];
      w(static_cast<Eigen::Index>(k)) = atoms[k][2];
    }
    return DiscreteMeasure::make(std::move(pts), std::move(w));
  }
  const auto& u = std::get<UniformGridReference>(spec);
  const std::size_t d = u.lo.size();
  if (d == 0 || u.hi.size() != d || u.resolution.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "grid box and resolution must share a dimension");
  }
  Eigen::Index total = 1;
  for (int n : u.resolution) {
    if (n < 1) throw Error(ErrorCode::EmptySupport, "grid resolution must be positive");
    total *= n;
  }
  Points pts(total, static_cast<Eigen::Index>(d));
  std::vector<int> idx(d, 0);
  for (Eigen::Index k = 0; k < total; ++k) {
    for (std::size_t a = 0; a < d; ++a) {
      pts(k, static_cast<Eigen::Index>(a)) = u.lo[a] + (idx[a] + 0.5) * (u.hi[a] - u.lo[a]) / u.resolution[a];
    }
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < u.resolution[a]) break;
      idx[a] = 0;
    }
  }
  return DiscreteMeasure::uniform(std::move(pts));
}

}  // namespace lot
