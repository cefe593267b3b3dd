#include "acqregret/domain.hpp"

#include "acqregret/errors.hpp"

namespace acqregret {

Domain::Domain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) {
    throw PreconditionError("domain bounds must be non-empty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(upper_[i] > lower_[i])) {
      throw PreconditionError("degenerate domain: upper bound must exceed lower bound on every axis");
    }
  }
}

Domain Domain::UnitCube(int dim) {
  return Domain(Vector::Zero(dim), Vector::Ones(dim));
}

bool Domain::contains(const Vector& x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] - tol && x[i] <= upper_[i] + tol)) return false;
  }
  return true;
}

Vector Domain::project(const Vector& x) const {
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

Vector Domain::ToUnit(const Vector& x) const {
  return ((x - lower_).array() / (upper_ - lower_).array()).matrix();
}

Vector Domain::FromUnit(const Vector& u) const {
  Vector x = lower_ + (u.array() * (upper_ - lower_).array()).matrix();
  return project(x);
}

Matrix Domain::ToUnitRows(const Matrix& rows) const {
  Matrix out(rows.rows(), rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out.row(r) = ToUnit(rows.row(r).transpose()).transpose();
  }
  return out;
}

}  // namespace acqregret
