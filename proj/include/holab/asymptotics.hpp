#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holab/holonomy.hpp"
#include "holab/path_model.hpp"

namespace holab {

/// Finite sum  sum_i a_i exp(i l_i c)  with pairwise distinct frequencies,
/// kept sorted by frequency. Coefficients whose frequencies coincide are merged.
template <typename Scalar>
class TrigPolynomial {
 public:
  using ComplexT = std::complex<Scalar>;
  struct Term {
    ComplexT coeff;
    Scalar freq;
  };

  TrigPolynomial() = default;
  TrigPolynomial(std::initializer_list<Term> terms) {
    for (const Term& t : terms) add(t.coeff, t.freq);
  }

  /// The character c -> exp(i l c).
  static TrigPolynomial character(Scalar l) { return TrigPolynomial{{ComplexT{1}, l}}; }

  void add(ComplexT coeff, Scalar freq) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), freq,
                               [](const Term& t, Scalar f) { return t.freq < f; });
    if (it != terms_.end() && it->freq == freq)
      it->coeff += coeff;
    else
      terms_.insert(it, Term{coeff, freq});
  }

  ComplexT operator()(Scalar c) const {
    ComplexT acc{0};
    for (const Term& t : terms_) acc += t.coeff * std::polar(Scalar(1), t.freq * c);
    return acc;
  }

  /// Bohr mean: the frequency-0 coefficient.
  ComplexT mean() const {
    for (const Term& t : terms_)
      if (t.freq == Scalar(0)) return t.coeff;
    return ComplexT{0};
  }

  Scalar coefficient_l1() const {
    Scalar s(0);
    for (const Term& t : terms_) s += std::abs(t.coeff);
    return s;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) {
    for (const Term& t : b.terms_) a.add(t.coeff, t.freq);
    return a;
  }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
    TrigPolynomial out;
    for (const Term& s : a.terms_)
      for (const Term& t : b.terms_) out.add(s.coeff * t.coeff, s.freq + t.freq);
    return out;
  }
  TrigPolynomial conj() const {
    TrigPolynomial out;
    for (const Term& t : terms_) out.add(std::conj(t.coeff), -t.freq);
    return out;
  }

 private:
  std::vector<Term> terms_;
};

/// Almost periodic leading part of alpha (or beta) at the path end,
///   (s00 + s11)/2 e^{-i phi} e^{i c t_end} + (s00 - s11)/2 e^{+i phi} e^{-i c t_end},
/// with phi = (1/2) int_0^{t_end} rho1.
struct AsymptoticPart {
  Complex coeff_plus;   // (s00 + s11) / 2
  Complex coeff_minus;  // (s00 - s11) / 2
  Complex phase_phi;
  double t_end;

  Complex operator()(double c) const;
  TrigPolynomial<double> trig_polynomial() const;
};

/// Throws QuadratureFailure if phi cannot be resolved to 1e-12.
AsymptoticPart asymptotic_part(const CoefficientProfile& cp, const InitialData& init,
                               double t_end);

/// Convenience overload: validates the coefficient profile and builds the
/// initial data of the requested branch.
AsymptoticPart asymptotic_part(const PathProfile& p, Branch branch);

struct ResidualSample {
  double c;
  Complex value;  // alpha_0(c) = alpha(c) - alpha_inf(c)
};

/// alpha(c) = a(t_end; c) / sqrt(m(t_end)) (continuous root branch), minus the
/// asymptotic part; beta and b analogously for Branch::Beta.
std::vector<ResidualSample> residual_sweep(const PathProfile& p, Branch branch,
                                           const std::vector<double>& c_grid,
                                           const HolonomyOptions& opt = {});

/// Grid of `windows` dyadic windows [C0 2^j, C0 2^{j+1}], each sampled at
/// per_window + 1 geometrically spaced points (window ends shared).
std::vector<double> dyadic_grid(double c0, int windows, int per_window = 64);

struct DecayWindow {
  double c_lo;
  double c_hi;
  double sup_c_residual;  // sup |c alpha_0(c)| over samples in the window
  int samples;
};

enum class DecayVerdict { Bounded, Suspicious };

struct DecayReport {
  std::vector<DecayWindow> windows;
  double global_sup = 0.0;
  DecayVerdict verdict = DecayVerdict::Bounded;
  std::optional<int> offending_window;
};

struct DecayOptions {
  double window_ratio = 1.5;
  int min_points_per_window = 64;
  int min_windows = 4;
  /// Window sups below this count as numerically zero.
  double absolute_floor = 1e-6;
};

/// Bounded iff every window sup is at most ratio times the previous one
/// (up to the absolute floor) and all sups are finite. `windows` = 0 takes
/// the largest k with C0 2^k inside the sampled range. Throws InsufficientGrid.
DecayReport verify_decay_bound(const std::vector<ResidualSample>& residuals, double c0,
                               int windows = 0, const DecayOptions& opt = {});

using ComplexFunction = std::function<Complex(double)>;

struct BohrMean {
  Complex value;
  double error_estimate;
};

/// (1/2T) int_{-T}^{T} f by composite Simpson with `samples` panels
/// (rounded up to even); the error estimate compares against half the panels.
BohrMean bohr_mean(const ComplexFunction& f, double T, long samples);

/// Bohr mean of c -> f(c) exp(-i l c).
BohrMean fourier_bohr_coefficient(const ComplexFunction& f, double l, double T, long samples);

struct NonApOptions {
  double eps = 1e-6;       // f counts as nonzero if its core sup exceeds 10 eps
  double eps_tail = 1e-2;  // tail sup below this counts as vanishing at infinity
  double tail_start = 1e3;
};

/// True iff f is visibly nonzero on the core (|c| < tail_start) yet
/// vanishes on the tail (|c| >= tail_start): such an f is not almost
/// periodic. False for f ~ 0 and for f whose tail sup stays comparable to
/// its core sup. Throws Inconclusive otherwise, InsufficientGrid if the
/// probe grid does not reach the tail.
bool is_nonap_witness(const ComplexFunction& f, const std::vector<double>& probe_grid,
                      const NonApOptions& opt = {});

}  // namespace holab
