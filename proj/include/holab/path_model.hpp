#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace holab {

using Complex = std::complex<double>;

/// Tolerances shared by the path-model validators.
struct PathTolerances {
  double arclength = 1e-8;  ///< max | |m|^2 + n^2 - 1 |
  double m_min = 1e-6;      ///< lower bound for |m| on the grid
  double sign = 1e-10;      ///< |Im rho| at or below this counts as zero
  double root = 1e-10;      ///< bisection width when locating sign changes
  int grid = 256;           ///< validation grid size
};

// Kind tags. Circles use m(t) = i exp(i (t / r + phase0)).
struct Straight {
  double length;
};
struct Circle {
  double radius;
  double phase0 = 0.0;
};
struct General {
  std::string label;
};
using PathKind = std::variant<Straight, Circle, General>;

/// The (m, n) profile of an arclength-parametrized analytic segment,
/// m = x' - i y', n = z'. Immutable after construction; every instance
/// has passed the arclength and m != 0 checks on the validation grid.
class PathProfile {
 public:
  using ComplexFn = std::function<Complex(double)>;
  using RealFn = std::function<double(double)>;

  struct Functions {
    ComplexFn m, m_dot, m_ddot;
    RealFn n, n_dot;
  };

  /// Validates and wraps user-supplied evaluators.
  /// Throws ArclengthViolation or ZeroM.
  static PathProfile create(Functions fns, double t_end, PathKind kind,
                            const PathTolerances& tol = {});

  Complex m(double t) const { return fns_.m(t); }
  Complex m_dot(double t) const { return fns_.m_dot(t); }
  Complex m_ddot(double t) const { return fns_.m_ddot(t); }
  double n(double t) const { return fns_.n(t); }
  double n_dot(double t) const { return fns_.n_dot(t); }
  /// M = m' / m.
  Complex M(double t) const { return fns_.m_dot(t) / fns_.m(t); }

  double t_end() const noexcept { return t_end_; }
  const PathKind& kind() const noexcept { return kind_; }
  const Functions& functions() const noexcept { return fns_; }
  const PathTolerances& tolerances() const noexcept { return tol_; }

  /// Short human-readable identifier ("straight(l=1)", ...).
  std::string id() const;

  /// The sub-segment [t0, t1], reparametrized to start at 0.
  PathProfile restrict(double t0, double t1) const;

  /// Continuous branch of sqrt(m(t)), principal at t = 0, obtained by
  /// unwrapping arg m along a grid of at least `tol.grid` points.
  Complex sqrt_m(double t) const;

  /// max | |m|^2 + n^2 - 1 | over the validation grid.
  double arclength_defect() const;

 private:
  PathProfile(Functions fns, double t_end, PathKind kind, PathTolerances tol)
      : fns_(std::move(fns)), t_end_(t_end), kind_(std::move(kind)), tol_(tol) {}

  Functions fns_;
  double t_end_;
  PathKind kind_;
  PathTolerances tol_;
};

/// Straight segment of the given length along the x axis: m = 1, n = 0.
PathProfile straight_profile(double length, const PathTolerances& tol = {});

/// Circle of radius r in the x-y plane traversed for arclength t_end,
/// m(t) = i exp(i t / r), n = 0.
PathProfile circle_profile(double radius, double t_end, const PathTolerances& tol = {});

/// A real function with its first three derivatives.
struct RealJet {
  std::function<double(double)> f, d1, d2, d3;
};

/// Builds m = sqrt(1 - n^2) exp(i theta) from a pitch function n(t) and a
/// turning angle theta(t); arclength holds by construction.
PathProfile pitch_turn_profile(const RealJet& pitch, const RealJet& turn, double t_end,
                               std::string label, const PathTolerances& tol = {});

/// n(t) = n0 + slope t, theta(t) = omega t. Im rho0 and Im rho1 keep their
/// signs when 0 < n < 1 on [0, t_end] and slope > 0.
PathProfile pitch_ramp_profile(double n0, double slope, double omega, double t_end,
                               const PathTolerances& tol = {});

/// n(t) = amplitude sin(t), theta(t) = t. Im rho1 flips sign at t = pi/2.
PathProfile pitch_wobble_profile(double amplitude, double t_end,
                                 const PathTolerances& tol = {});

/// Interpolates tabulated samples (t, m, n, m', n', m'') by cubic Hermite
/// pieces. Nodes must be strictly increasing and start at t = 0.
struct ProfileSample {
  double t;
  Complex m;
  double n;
  Complex m_dot;
  double n_dot;
  Complex m_ddot;
};
PathProfile sampled_profile(std::vector<ProfileSample> samples, const PathTolerances& tol = {});

/// One coordinate of a curve: value and derivatives. `d3` may be empty, in
/// which case m'' is taken from a fourth-order central difference of m'.
struct CurveComponent {
  std::function<double(double)> f, d1, d2, d3;
};

/// m = x' - i y', n = z' for a curve assumed analytic and arclength
/// parametrized. Throws ArclengthViolation or ZeroM.
PathProfile profile_from_curve(const CurveComponent& x, const CurveComponent& y,
                               const CurveComponent& z, double t_end,
                               const PathTolerances& tol = {});

enum class Sign { Negative, Zero, Positive };

/// rho0 = M^2/4 - M'/2 and rho1 = i (n' - M n) of the transformed second
/// order equation alpha'' + c^2 alpha = (rho0 + c rho1) alpha.
struct CoefficientProfile {
  std::function<Complex(double)> M, M_dot, rho0, rho1;
  double t_end;
  Sign im_rho0_sign;
  Sign im_rho1_sign;
};

/// Throws SignChange if Im rho0 or Im rho1 changes sign on the grid.
CoefficientProfile coefficient_profile(const PathProfile& p);

/// Splits p where Im rho0 or Im rho1 changes sign. The pieces tile [0, t_end].
std::vector<PathProfile> split_at_sign_changes(const PathProfile& p);

/// Breakpoints (including 0 and t_end) used by split_at_sign_changes.
std::vector<double> sign_change_breakpoints(const PathProfile& p);

enum class Branch { Alpha, Beta };

/// Initial data (alpha(0) = s00, alpha'(0) = i c s11 + s10) of the
/// transformed equation for alpha = a / sqrt(m) or beta = b / sqrt(m).
struct InitialData {
  Complex sigma00;
  Complex sigma10;
  Complex sigma11;
  Branch branch;
};

InitialData initial_data(const PathProfile& p, Branch branch);

}  // namespace holab
