#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "holab/path_model.hpp"

namespace holab {

/// An element [[a, b], [-conj(b), conj(a)]] of SU(2).
template <typename Scalar>
struct SU2Element {
  using ComplexT = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<ComplexT, 2, 2>;

  ComplexT a{1};
  ComplexT b{0};

  static SU2Element identity() { return {ComplexT{1}, ComplexT{0}}; }

  Matrix matrix() const {
    Matrix g;
    g << a, b, -std::conj(b), std::conj(a);
    return g;
  }

  /// | |a|^2 + |b|^2 - 1 |
  Scalar unitarity_defect() const { return std::abs(std::norm(a) + std::norm(b) - Scalar(1)); }
};

using SU2 = SU2Element<double>;

/// Holonomy of the concatenation "earlier, then later".
template <typename Scalar>
SU2Element<Scalar> compose(const SU2Element<Scalar>& later, const SU2Element<Scalar>& earlier) {
  return {later.a * earlier.a - later.b * std::conj(earlier.b),
          later.a * earlier.b + later.b * std::conj(earlier.a)};
}

template <typename Scalar>
SU2Element<Scalar> inverse(const SU2Element<Scalar>& g) {
  return {std::conj(g.a), -g.b};
}

template <typename Scalar>
Scalar frobenius_distance(const SU2Element<Scalar>& g, const SU2Element<Scalar>& h) {
  return (g.matrix() - h.matrix()).norm();
}

/// Largest entrywise deviation max(|a - a'|, |b - b'|).
template <typename Scalar>
Scalar entry_distance(const SU2Element<Scalar>& g, const SU2Element<Scalar>& h) {
  return std::max(std::abs(g.a - h.a), std::abs(g.b - h.b));
}

struct HolonomyOptions {
  double tol = 1e-10;
  long max_steps = 1'000'000;
  /// Step ceiling is `step_ceiling / (1 + |c|)`.
  double step_ceiling = 1.0;
};

/// Integrates a' = i c (n a - m conj(b)), b' = i c (n b + m conj(a)),
/// a(0) = 1, b(0) = 0 up to t_end. Throws ToleranceNotMet.
SU2 integrate_holonomy(const PathProfile& p, double c, const HolonomyOptions& opt = {});
SU2 integrate_holonomy(const PathProfile& p, double c, double tol);

/// Same system on [0, t_end] with `steps` fixed DOP853 steps.
SU2 integrate_holonomy_fixed(const PathProfile& p, double c, long steps);

/// Straight segment of length l: a = cos(c l), b = i sin(c l).
SU2 holonomy_straight(double length, double c);

/// i^{3/2}, fixed as exp(3 pi i / 4).
Complex i_three_halves();

/// Closed-form beta(t) = b(t) / sqrt(m(t)) for an arclength circle of
/// radius r with m(0) = i:
///   i^{3/2} c / sqrt(c^2 + 1/(4 r^2)) * sin(t sqrt(c^2 + 1/(4 r^2))).
Complex holonomy_circle_beta(double r, double t, double c);

/// c / sqrt(c^2 + 1/(4r^2)) sin(t sqrt(c^2 + 1/(4r^2))) - sin(c t).
double f_rt(double r, double t, double c);

/// Sampled map c -> holonomy over a strictly increasing grid.
struct CSweep {
  std::vector<double> c_grid;
  std::vector<SU2> values;
  std::string profile_id;
  double t_end = 0.0;
};

/// Element-wise integrate_holonomy. Entries are independent. A failing
/// entry rethrows ToleranceNotMet naming the offending c.
CSweep sweep(const PathProfile& p, const std::vector<double>& c_grid,
             const HolonomyOptions& opt = {});

/// `count` equally spaced points on [lo, hi] (lo only when count == 1).
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace holab
