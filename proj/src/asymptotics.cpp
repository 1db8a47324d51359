#include "holab/asymptotics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "holab/errors.hpp"

namespace holab {

namespace {

constexpr Complex kI{0.0, 1.0};

double integrate_real(const std::function<double(double)>& f, double a, double b, double& err) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15, &err);
}

}  // namespace

Complex AsymptoticPart::operator()(double c) const {
  return coeff_plus * std::exp(-kI * phase_phi) * std::polar(1.0, c * t_end) +
         coeff_minus * std::exp(kI * phase_phi) * std::polar(1.0, -c * t_end);
}

TrigPolynomial<double> AsymptoticPart::trig_polynomial() const {
  TrigPolynomial<double> tp;
  tp.add(coeff_plus * std::exp(-kI * phase_phi), t_end);
  tp.add(coeff_minus * std::exp(kI * phase_phi), -t_end);
  return tp;
}

AsymptoticPart asymptotic_part(const CoefficientProfile& cp, const InitialData& init,
                               double t_end) {
  double err_re = 0.0, err_im = 0.0;
  const double re = integrate_real([&](double t) { return cp.rho1(t).real(); }, 0.0, t_end, err_re);
  const double im = integrate_real([&](double t) { return cp.rho1(t).imag(); }, 0.0, t_end, err_im);
  const double scale = std::max(1.0, std::hypot(re, im));
  if (!std::isfinite(re) || !std::isfinite(im) || err_re > 1e-12 * scale ||
      err_im > 1e-12 * scale)
    throw QuadratureFailure("phase integral of rho1 not resolved to 1e-12 (error estimate " +
                            std::to_string(std::max(err_re, err_im)) + ")");
  return AsymptoticPart{0.5 * (init.sigma00 + init.sigma11), 0.5 * (init.sigma00 - init.sigma11),
                        0.5 * Complex{re, im}, t_end};
}

AsymptoticPart asymptotic_part(const PathProfile& p, Branch branch) {
  return asymptotic_part(coefficient_profile(p), initial_data(p, branch), p.t_end());
}

std::vector<ResidualSample> residual_sweep(const PathProfile& p, Branch branch,
                                           const std::vector<double>& c_grid,
                                           const HolonomyOptions& opt) {
  const AsymptoticPart asym = asymptotic_part(p, branch);
  const Complex root = p.sqrt_m(p.t_end());
  std::vector<ResidualSample> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) {
    const SU2 h = integrate_holonomy(p, c, opt);
    const Complex entry = (branch == Branch::Alpha ? h.a : h.b) / root;
    out.push_back({c, entry - asym(c)});
  }
  return out;
}

std::vector<double> dyadic_grid(double c0, int windows, int per_window) {
  if (!(c0 > 0.0) || windows < 1 || per_window < 1)
    throw ValidationError("dyadic grid needs C0 > 0, windows >= 1 and per_window >= 1");
  std::vector<double> g;
  const int total = windows * per_window;
  g.reserve(static_cast<std::size_t>(total) + 1);
  for (int i = 0; i <= total; ++i)
    g.push_back(c0 * std::exp2(static_cast<double>(i) / per_window));
  return g;
}

DecayReport verify_decay_bound(const std::vector<ResidualSample>& residuals, double c0,
                               int windows, const DecayOptions& opt) {
  if (!(c0 > 0.0)) throw InsufficientGrid("decay certification needs C0 > 0");
  double c_max = 0.0;
  for (const auto& r : residuals) c_max = std::max(c_max, r.c);
  if (windows == 0)
    windows = c_max >= c0 ? static_cast<int>(std::floor(std::log2(c_max / c0) + 1e-9)) : 0;
  if (windows < opt.min_windows)
    throw InsufficientGrid("need at least " + std::to_string(opt.min_windows) +
                           " dyadic windows above C0, have " + std::to_string(windows));

  DecayReport rep;
  for (int j = 0; j < windows; ++j) {
    const double lo = c0 * std::exp2(j), hi = c0 * std::exp2(j + 1);
    // Relative slack so that geometrically generated window ends count as inside.
    const double lo_in = lo * (1 - 1e-12), hi_in = hi * (1 + 1e-12);
    DecayWindow w{lo, hi, 0.0, 0};
    for (const auto& r : residuals) {
      if (r.c < lo_in || r.c > hi_in) continue;
      ++w.samples;
      const double v = std::abs(r.c * r.value);
      w.sup_c_residual = std::isfinite(v) ? std::max(w.sup_c_residual, v)
                                          : std::numeric_limits<double>::infinity();
    }
    if (w.samples < opt.min_points_per_window)
      throw InsufficientGrid("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "] has " + std::to_string(w.samples) + " samples, need " +
                             std::to_string(opt.min_points_per_window));
    rep.windows.push_back(w);
    rep.global_sup = std::max(rep.global_sup, w.sup_c_residual);
  }
  for (std::size_t j = 0; j < rep.windows.size(); ++j) {
    const double s = rep.windows[j].sup_c_residual;
    bool bad = !std::isfinite(s);
    if (j > 0 && !bad)
      bad = s > opt.window_ratio * rep.windows[j - 1].sup_c_residual + opt.absolute_floor;
    if (bad) {
      rep.verdict = DecayVerdict::Suspicious;
      rep.offending_window = static_cast<int>(j);
      break;
    }
  }
  return rep;
}

BohrMean bohr_mean(const ComplexFunction& f, double T, long samples) {
  if (!(T > 0.0)) throw ValidationError("Bohr mean needs T > 0");
  if (samples < 1024) throw ValidationError("Bohr mean needs at least 1024 samples");
  if (samples % 4 != 0) samples += 4 - samples % 4;  // both N and N/2 even
  const double h = 2.0 * T / samples;
  Complex fine{}, coarse{};
  for (long k = 0; k <= samples; ++k) {
    const Complex v = f(-T + k * h);
    const double wf = (k == 0 || k == samples) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    fine += wf * v;
    if (k % 2 == 0) {
      const long j = k / 2;
      const double wc = (j == 0 || j == samples / 2) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      coarse += wc * v;
    }
  }
  fine *= h / 3.0;
  coarse *= 2.0 * h / 3.0;
  return BohrMean{fine / (2.0 * T), std::abs(fine - coarse) / 15.0 / (2.0 * T)};
}

BohrMean fourier_bohr_coefficient(const ComplexFunction& f, double l, double T, long samples) {
  return bohr_mean([&](double c) { return f(c) * std::polar(1.0, -l * c); }, T, samples);
}

bool is_nonap_witness(const ComplexFunction& f, const std::vector<double>& probe_grid,
                      const NonApOptions& opt) {
  double core_sup = 0.0, tail_sup = 0.0;
  std::size_t core_n = 0, tail_n = 0;
  for (double c : probe_grid) {
    const double v = std::abs(f(c));
    if (std::abs(c) >= opt.tail_start) {
      tail_sup = std::max(tail_sup, v);
      ++tail_n;
    } else {
      core_sup = std::max(core_sup, v);
      ++core_n;
    }
  }
  if (core_n == 0 || tail_n == 0)
    throw InsufficientGrid("probe grid must contain points with |c| below and above " +
                           std::to_string(opt.tail_start));
  if (!(core_sup > 10.0 * opt.eps)) return false;
  if (tail_sup < opt.eps_tail) return true;
  if (tail_sup >= 0.5 * core_sup) return false;
  throw Inconclusive("tail sup " + std::to_string(tail_sup) + " neither vanishes nor matches core sup " +
                     std::to_string(core_sup));
}

}  // namespace holab
