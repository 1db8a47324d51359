#include "holab/holonomy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "holab/dop853.hpp"
#include "holab/errors.hpp"

namespace holab {

namespace {

constexpr Complex kI{0.0, 1.0};

using State = Eigen::Vector2cd;

auto transport_rhs(const PathProfile& p, double c) {
  return [&p, c](double t, const State& y) -> State {
    const Complex m = p.m(t);
    const double n = p.n(t);
    const Complex ic = kI * c;
    State dy;
    dy[0] = ic * (n * y[0] - m * std::conj(y[1]));
    dy[1] = ic * (n * y[1] + m * std::conj(y[0]));
    return dy;
  };
}

}  // namespace

SU2 integrate_holonomy(const PathProfile& p, double c, const HolonomyOptions& opt) {
  if (!(opt.tol >= 1e-13 && opt.tol <= 1e-3))
    throw ValidationError("tol must lie in [1e-13, 1e-3]");
  // Per-step target tol/10 keeps the accumulated error over long
  // oscillatory spans (c t ~ 100) below tol.
  StepControl ctl;
  ctl.rtol = 0.1 * opt.tol;
  ctl.atol = 0.1 * opt.tol;
  ctl.max_steps = opt.max_steps;
  ctl.h_max = opt.step_ceiling / (1.0 + std::abs(c));
  const State y0(Complex{1.0, 0.0}, Complex{});
  if (c == 0.0) return SU2::identity();
  try {
    const auto res = integrate_dop853(transport_rhs(p, c), 0.0, p.t_end(), y0, ctl);
    return SU2{res.y[0], res.y[1]};
  } catch (const ToleranceNotMet& e) {
    std::ostringstream os;
    os.precision(17);
    os << "holonomy at c = " << c << " on " << p.id() << ": " << e.what();
    throw ToleranceNotMet(os.str(), e.achieved_error());
  }
}

SU2 integrate_holonomy(const PathProfile& p, double c, double tol) {
  HolonomyOptions opt;
  opt.tol = tol;
  return integrate_holonomy(p, c, opt);
}

SU2 integrate_holonomy_fixed(const PathProfile& p, double c, long steps) {
  if (steps < 1) throw ValidationError("fixed-step integration needs at least one step");
  const State y0(Complex{1.0, 0.0}, Complex{});
  const State y = integrate_dop853_fixed(transport_rhs(p, c), 0.0, p.t_end(), y0, steps);
  return SU2{y[0], y[1]};
}

SU2 holonomy_straight(double length, double c) {
  if (!(length > 0.0)) throw ValidationError("straight segment length must be positive");
  return SU2{Complex{std::cos(c * length), 0.0}, Complex{0.0, std::sin(c * length)}};
}

Complex i_three_halves() { return std::polar(1.0, 0.75 * std::numbers::pi); }

Complex holonomy_circle_beta(double r, double t, double c) {
  if (!(r > 0.0) || !(t > 0.0)) throw ValidationError("circle radius and time must be positive");
  const double w = std::sqrt(c * c + 1.0 / (4.0 * r * r));
  return i_three_halves() * (c / w) * std::sin(t * w);
}

double f_rt(double r, double t, double c) {
  if (!(r > 0.0) || !(t > 0.0)) throw ValidationError("f_rt needs r > 0 and t > 0");
  if (c == 0.0) return 0.0;
  const double w = std::sqrt(c * c + 1.0 / (4.0 * r * r));
  return (c / w) * std::sin(t * w) - std::sin(c * t);
}

CSweep sweep(const PathProfile& p, const std::vector<double>& c_grid, const HolonomyOptions& opt) {
  for (std::size_t i = 1; i < c_grid.size(); ++i)
    if (!(c_grid[i] > c_grid[i - 1]))
      throw ValidationError("sweep grid must be strictly increasing");
  CSweep out;
  out.c_grid = c_grid;
  out.profile_id = p.id();
  out.t_end = p.t_end();
  out.values.resize(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) out.values[i] = integrate_holonomy(p, c_grid[i], opt);
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("grid needs at least one point");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int k = 0; k < count; ++k) g[k] = lo + (hi - lo) * k / (count - 1);
  g.back() = hi;
  return g;
}

}  // namespace holab
