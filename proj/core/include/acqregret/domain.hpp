#pragma once

#include <Eigen/Core>

#include <vector>

namespace acqregret {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lower, upper] in R^d.
class Domain {
 public:
  Domain() = default;
  Domain(Vector lower, Vector upper);

  /// The unit cube [0,1]^d.
  static Domain UnitCube(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector width() const { return upper_ - lower_; }

  /// Euclidean diameter, the largest distance between two points of the box.
  double diameter() const { return (upper_ - lower_).norm(); }

  bool contains(const Vector& x, double tol = 0.0) const;
  Vector project(const Vector& x) const;

  // Affine maps between the box and [0,1]^d. FromUnit clamps into the box so
  // that round-off never produces an infeasible point.
  Vector ToUnit(const Vector& x) const;
  Vector FromUnit(const Vector& u) const;
  Matrix ToUnitRows(const Matrix& rows) const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace acqregret
