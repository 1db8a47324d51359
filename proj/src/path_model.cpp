#include "holab/path_model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "holab/errors.hpp"

namespace holab {

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<double> uniform_grid(double t_end, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[k] = t_end * k / (points - 1);
  grid.back() = t_end;
  return grid;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Sign classify(double v, double eps) {
  if (v > eps) return Sign::Positive;
  if (v < -eps) return Sign::Negative;
  return Sign::Zero;
}

// Overall sign of g on the grid, or nullopt if both signs occur.
std::optional<Sign> grid_sign(const std::function<double(double)>& g,
                              const std::vector<double>& grid, double eps) {
  bool pos = false, neg = false;
  for (double t : grid) {
    const Sign s = classify(g(t), eps);
    pos |= s == Sign::Positive;
    neg |= s == Sign::Negative;
  }
  if (pos && neg) return std::nullopt;
  return pos ? Sign::Positive : (neg ? Sign::Negative : Sign::Zero);
}

struct Hermite {
  // Cubic Hermite value and derivative on [t0, t1].
  template <typename T>
  static std::pair<T, T> eval(double t, double t0, double t1, T y0, T d0, T y1, T d1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const T value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
                    (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
    const T deriv = ((6 * s2 - 6 * s) / h) * y0 + (3 * s2 - 4 * s + 1) * d0 +
                    ((-6 * s2 + 6 * s) / h) * y1 + (3 * s2 - 2 * s) * d1;
    return {value, deriv};
  }
};

}  // namespace

PathProfile PathProfile::create(Functions fns, double t_end, PathKind kind,
                                const PathTolerances& tol) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw ValidationError("path length t_end must be positive, got " + format_double(t_end));
  if (!fns.m || !fns.m_dot || !fns.m_ddot || !fns.n || !fns.n_dot)
    throw ValidationError("path profile requires m, m', m'', n and n' evaluators");
  if (tol.grid < 2) throw ValidationError("validation grid needs at least 2 points");

  PathProfile p(std::move(fns), t_end, std::move(kind), tol);
  double worst = 0.0, worst_t = 0.0;
  for (double t : uniform_grid(t_end, tol.grid)) {
    const Complex m = p.m(t);
    const double n = p.n(t);
    const double defect = std::abs(std::norm(m) + n * n - 1.0);
    if (!(defect <= worst) || !std::isfinite(defect)) {
      worst = defect;
      worst_t = t;
    }
    if (!(std::abs(m) >= tol.m_min))
      throw ZeroM("|m(t)| = " + format_double(std::abs(m)) + " below m_min at t = " +
                  format_double(t));
  }
  if (!(worst <= tol.arclength))
    throw ArclengthViolation("arclength condition |m|^2 + n^2 = 1 violated by " +
                             format_double(worst) + " at t = " + format_double(worst_t));
  return p;
}

std::string PathProfile::id() const {
  return std::visit(
      [this](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Straight>) {
          return "straight(l=" + format_double(k.length) + ")";
        } else if constexpr (std::is_same_v<K, Circle>) {
          return "circle(r=" + format_double(k.radius) + ",t=" + format_double(t_end_) + ")";
        } else {
          return "general(" + k.label + ",t=" + format_double(t_end_) + ")";
        }
      },
      kind_);
}

PathProfile PathProfile::restrict(double t0, double t1) const {
  if (!(t0 >= 0.0 && t1 <= t_end_ * (1 + 1e-15) && t1 > t0))
    throw ValidationError("restriction [" + format_double(t0) + ", " + format_double(t1) +
                          "] outside [0, " + format_double(t_end_) + "]");
  Functions f;
  const Functions& g = fns_;
  f.m = [g, t0](double t) { return g.m(t + t0); };
  f.m_dot = [g, t0](double t) { return g.m_dot(t + t0); };
  f.m_ddot = [g, t0](double t) { return g.m_ddot(t + t0); };
  f.n = [g, t0](double t) { return g.n(t + t0); };
  f.n_dot = [g, t0](double t) { return g.n_dot(t + t0); };
  PathKind k = std::visit(
      [&](const auto& kk) -> PathKind {
        using K = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<K, Straight>) {
          return Straight{t1 - t0};
        } else if constexpr (std::is_same_v<K, Circle>) {
          return Circle{kk.radius, kk.phase0 + t0 / kk.radius};
        } else {
          return General{kk.label + "[" + format_double(t0) + "," + format_double(t1) + "]"};
        }
      },
      kind_);
  return create(std::move(f), t1 - t0, std::move(k), tol_);
}

Complex PathProfile::sqrt_m(double t) const {
  const Complex m0 = m(0.0);
  if (t == 0.0) return std::sqrt(m0);
  int steps = std::max(tol_.grid, static_cast<int>(std::ceil(tol_.grid * std::abs(t) / t_end_)));
  // Refine until every increment of arg m is well below pi.
  for (int attempt = 0; attempt < 12; ++attempt, steps *= 2) {
    double arg = std::arg(m0);
    Complex prev = m0;
    bool ok = true;
    for (int k = 1; k <= steps; ++k) {
      const Complex cur = m(t * k / steps);
      const double d = std::arg(cur / prev);
      if (std::abs(d) > std::numbers::pi / 4) {
        ok = false;
        break;
      }
      arg += d;
      prev = cur;
    }
    if (ok) return std::polar(std::sqrt(std::abs(prev)), 0.5 * arg);
  }
  throw ValidationError("arg m(t) does not vary continuously enough to unwrap");
}

double PathProfile::arclength_defect() const {
  double worst = 0.0;
  for (double t : uniform_grid(t_end_, tol_.grid))
    worst = std::max(worst, std::abs(std::norm(m(t)) + n(t) * n(t) - 1.0));
  return worst;
}

PathProfile straight_profile(double length, const PathTolerances& tol) {
  PathProfile::Functions f;
  f.m = [](double) { return Complex{1.0, 0.0}; };
  f.m_dot = [](double) { return Complex{}; };
  f.m_ddot = [](double) { return Complex{}; };
  f.n = [](double) { return 0.0; };
  f.n_dot = [](double) { return 0.0; };
  return PathProfile::create(std::move(f), length, Straight{length}, tol);
}

PathProfile circle_profile(double radius, double t_end, const PathTolerances& tol) {
  if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
  PathProfile::Functions f;
  f.m = [radius](double t) { return kI * std::exp(kI * (t / radius)); };
  f.m_dot = [radius](double t) { return (kI / radius) * kI * std::exp(kI * (t / radius)); };
  f.m_ddot = [radius](double t) { return -kI * std::exp(kI * (t / radius)) / (radius * radius); };
  f.n = [](double) { return 0.0; };
  f.n_dot = [](double) { return 0.0; };
  return PathProfile::create(std::move(f), t_end, Circle{radius, 0.0}, tol);
}

PathProfile pitch_turn_profile(const RealJet& pitch, const RealJet& turn, double t_end,
                               std::string label, const PathTolerances& tol) {
  struct Frame {
    double s, s1, s2;
    Complex rot;
    double th1, th2;
  };
  auto frame = [pitch, turn](double t) {
    const double n = pitch.f(t), n1 = pitch.d1(t), n2 = pitch.d2(t);
    const double s = std::sqrt(1.0 - n * n);
    const double s1 = -n * n1 / s;
    const double s2 = -(n1 * n1 + n * n2) / s - n * n * n1 * n1 / (s * s * s);
    return Frame{s, s1, s2, std::exp(kI * turn.f(t)), turn.d1(t), turn.d2(t)};
  };
  PathProfile::Functions f;
  f.m = [frame](double t) {
    const Frame fr = frame(t);
    return fr.s * fr.rot;
  };
  f.m_dot = [frame](double t) {
    const Frame fr = frame(t);
    return (fr.s1 + kI * fr.s * fr.th1) * fr.rot;
  };
  f.m_ddot = [frame](double t) {
    const Frame fr = frame(t);
    return (fr.s2 + 2.0 * kI * fr.s1 * fr.th1 + kI * fr.s * fr.th2 - fr.s * fr.th1 * fr.th1) *
           fr.rot;
  };
  f.n = pitch.f;
  f.n_dot = pitch.d1;
  return PathProfile::create(std::move(f), t_end, General{std::move(label)}, tol);
}

PathProfile pitch_ramp_profile(double n0, double slope, double omega, double t_end,
                               const PathTolerances& tol) {
  RealJet pitch{[n0, slope](double t) { return n0 + slope * t; },
                [slope](double) { return slope; }, [](double) { return 0.0; },
                [](double) { return 0.0; }};
  RealJet turn{[omega](double t) { return omega * t; }, [omega](double) { return omega; },
               [](double) { return 0.0; }, [](double) { return 0.0; }};
  return pitch_turn_profile(pitch, turn, t_end,
                            "ramp(n0=" + format_double(n0) + ",k=" + format_double(slope) +
                                ",w=" + format_double(omega) + ")",
                            tol);
}

PathProfile pitch_wobble_profile(double amplitude, double t_end, const PathTolerances& tol) {
  RealJet pitch{[amplitude](double t) { return amplitude * std::sin(t); },
                [amplitude](double t) { return amplitude * std::cos(t); },
                [amplitude](double t) { return -amplitude * std::sin(t); },
                [amplitude](double t) { return -amplitude * std::cos(t); }};
  RealJet turn{[](double t) { return t; }, [](double) { return 1.0; },
               [](double) { return 0.0; }, [](double) { return 0.0; }};
  return pitch_turn_profile(pitch, turn, t_end, "wobble(a=" + format_double(amplitude) + ")",
                            tol);
}

PathProfile sampled_profile(std::vector<ProfileSample> samples, const PathTolerances& tol) {
  if (samples.size() < 2) throw ValidationError("sampled profile needs at least two samples");
  if (samples.front().t != 0.0) throw ValidationError("sampled profile must start at t = 0");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].t > samples[i - 1].t))
      throw ValidationError("sample times must be strictly increasing");

  auto table = std::make_shared<const std::vector<ProfileSample>>(std::move(samples));
  auto locate = [table](double t) {
    const auto& s = *table;
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const ProfileSample& p) { return v < p.t; });
    std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    return std::min(i, s.size() - 2);
  };
  PathProfile::Functions f;
  f.m = [table, locate](double t) {
    const auto i = locate(t);
    const auto& a = (*table)[i];
    const auto& b = (*table)[i + 1];
    return Hermite::eval<Complex>(t, a.t, b.t, a.m, a.m_dot, b.m, b.m_dot).first;
  };
  f.m_dot = [table, locate](double t) {
    const auto i = locate(t);
    const auto& a = (*table)[i];
    const auto& b = (*table)[i + 1];
    return Hermite::eval<Complex>(t, a.t, b.t, a.m_dot, a.m_ddot, b.m_dot, b.m_ddot).first;
  };
  f.m_ddot = [table, locate](double t) {
    const auto i = locate(t);
    const auto& a = (*table)[i];
    const auto& b = (*table)[i + 1];
    return Hermite::eval<Complex>(t, a.t, b.t, a.m_dot, a.m_ddot, b.m_dot, b.m_ddot).second;
  };
  f.n = [table, locate](double t) {
    const auto i = locate(t);
    const auto& a = (*table)[i];
    const auto& b = (*table)[i + 1];
    return Hermite::eval<double>(t, a.t, b.t, a.n, a.n_dot, b.n, b.n_dot).first;
  };
  f.n_dot = [table, locate](double t) {
    const auto i = locate(t);
    const auto& a = (*table)[i];
    const auto& b = (*table)[i + 1];
    return Hermite::eval<double>(t, a.t, b.t, a.n, a.n_dot, b.n, b.n_dot).second;
  };
  const double t_end = table->back().t;
  return PathProfile::create(std::move(f), t_end,
                             General{"samples(" + std::to_string(table->size()) + ")"}, tol);
}

PathProfile profile_from_curve(const CurveComponent& x, const CurveComponent& y,
                               const CurveComponent& z, double t_end,
                               const PathTolerances& tol) {
  if (!x.d1 || !x.d2 || !y.d1 || !y.d2 || !z.d1 || !z.d2)
    throw ValidationError("curve components need first and second derivatives");
  PathProfile::Functions f;
  f.m = [x, y](double t) { return Complex{x.d1(t), -y.d1(t)}; };
  f.m_dot = [x, y](double t) { return Complex{x.d2(t), -y.d2(t)}; };
  if (x.d3 && y.d3) {
    f.m_ddot = [x, y](double t) { return Complex{x.d3(t), -y.d3(t)}; };
  } else {
    f.m_ddot = [x, y](double t) {
      constexpr double h = 1e-3;
      auto md = [&](double s) { return Complex{x.d2(s), -y.d2(s)}; };
      return (-md(t + 2 * h) + 8.0 * md(t + h) - 8.0 * md(t - h) + md(t - 2 * h)) / (12 * h);
    };
  }
  f.n = z.d1;
  f.n_dot = z.d2;
  return PathProfile::create(std::move(f), t_end, General{"curve"}, tol);
}

namespace {

struct Coefficients {
  std::function<Complex(double)> M, M_dot, rho0, rho1;
};

Coefficients make_coefficients(const PathProfile& p) {
  const PathProfile::Functions fns = p.functions();
  Coefficients c;
  c.M = [fns](double t) { return fns.m_dot(t) / fns.m(t); };
  c.M_dot = [fns](double t) {
    const Complex M = fns.m_dot(t) / fns.m(t);
    return fns.m_ddot(t) / fns.m(t) - M * M;
  };
  c.rho0 = [M = c.M, Md = c.M_dot](double t) {
    const Complex m = M(t);
    return 0.25 * m * m - 0.5 * Md(t);
  };
  c.rho1 = [M = c.M, fns](double t) { return kI * (fns.n_dot(t) - M(t) * fns.n(t)); };
  return c;
}

}  // namespace

CoefficientProfile coefficient_profile(const PathProfile& p) {
  const Coefficients c = make_coefficients(p);
  const auto grid = uniform_grid(p.t_end(), p.tolerances().grid);
  const double eps = p.tolerances().sign;
  const auto s0 = grid_sign([&](double t) { return c.rho0(t).imag(); }, grid, eps);
  const auto s1 = grid_sign([&](double t) { return c.rho1(t).imag(); }, grid, eps);
  if (!s0) throw SignChange("Im rho0 changes sign on " + p.id() + "; split the segment first");
  if (!s1) throw SignChange("Im rho1 changes sign on " + p.id() + "; split the segment first");
  return CoefficientProfile{c.M, c.M_dot, c.rho0, c.rho1, p.t_end(), *s0, *s1};
}

std::vector<double> sign_change_breakpoints(const PathProfile& p) {
  const Coefficients c = make_coefficients(p);
  const auto& tol = p.tolerances();
  const auto grid = uniform_grid(p.t_end(), tol.grid);
  std::vector<double> cuts{0.0, p.t_end()};

  auto scan = [&](const std::function<double(double)>& g) {
    Sign last = Sign::Zero;
    double last_t = 0.0;
    for (double t : grid) {
      const Sign s = classify(g(t), tol.sign);
      if (s == Sign::Zero) continue;
      if (last != Sign::Zero && s != last) {
        // Bisect on the bracket [last_t, t] for the crossing.
        double lo = last_t, hi = t;
        while (hi - lo > tol.root) {
          const double mid = 0.5 * (lo + hi);
          if (classify(g(mid), 0.0) == last)
            lo = mid;
          else
            hi = mid;
        }
        cuts.push_back(0.5 * (lo + hi));
      }
      last = s;
      last_t = t;
    }
  };
  scan([&](double t) { return c.rho0(t).imag(); });
  scan([&](double t) { return c.rho1(t).imag(); });

  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double t : cuts)
    if (merged.empty() || t - merged.back() > 10 * tol.root) merged.push_back(t);
  merged.back() = p.t_end();
  return merged;
}

namespace {

void split_into(const PathProfile& p, int depth, std::vector<PathProfile>& out) {
  if (depth > 24) throw SignChange("could not isolate sign changes on " + p.id());
  const auto cuts = sign_change_breakpoints(p);
  if (cuts.size() == 2) {
    try {
      coefficient_profile(p);
      out.push_back(p);
      return;
    } catch (const SignChange&) {
      // The grid missed a pair of crossings; halve and rescan.
    }
    const double half = 0.5 * p.t_end();
    split_into(p.restrict(0.0, half), depth + 1, out);
    split_into(p.restrict(half, p.t_end()), depth + 1, out);
    return;
  }
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    split_into(p.restrict(cuts[k], cuts[k + 1]), depth + 1, out);
}

}  // namespace

std::vector<PathProfile> split_at_sign_changes(const PathProfile& p) {
  std::vector<PathProfile> out;
  split_into(p, 0, out);
  return out;
}

InitialData initial_data(const PathProfile& p, Branch branch) {
  const Complex root = p.sqrt_m(0.0);
  if (branch == Branch::Beta) return InitialData{Complex{}, Complex{}, root, Branch::Beta};
  return InitialData{1.0 / root, -0.5 * p.M(0.0) / root, p.n(0.0) / root, Branch::Alpha};
}

}  // namespace holab
