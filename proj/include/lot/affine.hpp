#pragma once

#include <optional>

#include "lot/measures.hpp"

namespace lot {

// x -> scale * x + offset with scale > 0. Shifts (scale 1) and scalings
// (offset 0) form the compatible family E; convex combinations of two such
// maps are general positive affine maps.
class AffineMap {
 public:
  enum class Kind { Shift, Scale, Affine };

  static AffineMap shift(Vector a);
  static AffineMap scaling(double c, int dim);
  static AffineMap identity(int dim) { return shift(Vector::Zero(dim)); }
  // Throws InvalidArgument if scale <= 0.
  static AffineMap general(double scale, Vector offset);

  // (1 - c) * h1 + c * h2, pointwise. Throws InvalidArgument when the
  // resulting linear part is not positive.
  static AffineMap combine(const AffineMap& h1, const AffineMap& h2, double c);

  Kind kind() const;
  bool in_family_e() const { return kind() != Kind::Affine; }
  double scale() const { return scale_; }
  const Vector& offset() const { return offset_; }
  int dim() const { return static_cast<int>(offset_.size()); }

  Vector operator()(const Vector& x) const { return scale_ * x + offset_; }
  Points apply_rows(const Points& xs) const;

  // h2 after h1.
  friend AffineMap then(const AffineMap& h1, const AffineMap& h2) {
    return AffineMap(h2.scale_ * h1.scale_, h2.scale_ * h1.offset_ + h2.offset_);
  }

 private:
  AffineMap(double scale, Vector offset) : scale_(scale), offset_(std::move(offset)) {}

  double scale_ = 1.0;
  Vector offset_;
};

}  // namespace lot
