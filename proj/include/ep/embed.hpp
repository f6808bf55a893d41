#pragma once
#include <cstddef>
#include <vector>

#include "ep/field2d.hpp"

namespace ep {

// Natural cubic spline on uniformly spaced samples x_i = i * dx, i = 0..n-1.
// Evaluates to 0 outside [0, (n-1) dx].
class CubicSpline {
 public:
  CubicSpline(const std::vector<double>& values, double dx);
  double operator()(double x) const;
  double x_max() const { return dx_ * static_cast<double>(y_.size() - 1); }

 private:
  std::vector<double> y_, m_; // values and second derivatives
  double dx_;
};

// Radial vector field embedded in the plane: eta(x) = f(|x|) x/|x| with
// cubic-spline interpolation of the profile f sampled at radii i * dr.
// Preconditions: f(0) = 0 (origin regularity) and the samples either cover
// the half-diagonal of the box or have decayed below 1e-12 of the sup.
VectorField2D embed_radial(const std::vector<double>& f, double dr, const CartesianGrid& grid);

// Scalar variant: s(x) = f(|x|), same sampling (no origin constraint).
ScalarField2D embed_radial_scalar(const std::vector<double>& f, double dr, const CartesianGrid& grid);

struct RadialExtract {
  std::vector<double> radius;   // exact ring radii (sqrt of integer sums of squares)
  std::vector<double> profile;  // angular mean of the radial component per ring
  double asymmetry = 0.0;       // max over rings of angular stddev / global sup
};

// Groups grid nodes into rings of exactly equal radius (integer dx^2 + dy^2
// in index units about the origin node) and averages the radial component of
// eta over each ring.
RadialExtract extract_radial(const VectorField2D& eta);

} // namespace ep
