#include "rrtsim/point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rrtsim {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("Point: dimension must be in [1, " +
                                std::to_string(kMaxDim) + "], got " + std::to_string(dim));
  }
}

}  // namespace

Point::Point(int dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  int i = 0;
  for (double v : coords) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Point: coordinate " + std::to_string(i) +
                                  " outside [0,1]: " + std::to_string(v));
    }
    c_[static_cast<std::size_t>(i++)] = v;
  }
}

Point::Point(const double* coords, int dim) : dim_(dim) {
  check_dim(dim);
  for (int i = 0; i < dim; ++i) c_[static_cast<std::size_t>(i)] = coords[i];
}

bool Point::operator==(const Point& other) const {
  if (dim_ != other.dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (c_[static_cast<std::size_t>(i)] != other.c_[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

double distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("distance: dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
  return std::sqrt(sq_dist(a.data(), b.data(), a.dim()));
}

Point uniform_sample(int dim, RngStream& rng) {
  check_dim(dim);
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = rng.next_double();
  return p;
}

Point steer(const Point& from, const Point& toward, double dist, double epsilon) {
  if (from.dim() != toward.dim()) throw std::invalid_argument("steer: dimension mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("steer: epsilon must be > 0");
  if (!(dist > epsilon)) {
    throw std::invalid_argument("steer: requires dist > epsilon (adopt the draw instead)");
  }
  const double t = epsilon / dist;
  Point out(from.dim());
  for (int i = 0; i < from.dim(); ++i) {
    double v = from[i] + t * (toward[i] - from[i]);
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out[i] = v;
  }
  return out;
}

bool in_half_space(const Point& p, int axis, double threshold) {
  if (axis < 0 || axis >= p.dim()) throw std::invalid_argument("in_half_space: axis out of range");
  return p[axis] >= threshold;
}

}  // namespace rrtsim
