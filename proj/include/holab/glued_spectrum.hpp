#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "holab/path_model.hpp"

namespace holab {

/// Rank-k basis of real lengths, each label with its numeric value.
/// Labels: "1", "pi", "sqrtN" (N a positive integer), or a decimal literal.
struct NumericBasis {
  std::vector<std::string> labels;
  std::vector<double> values;

  std::size_t rank() const noexcept { return values.size(); }
};

/// Comma-separated labels; the empty string gives the rank-0 basis.
NumericBasis parse_numeric_basis(const std::string& s);
double basis_label_value(const std::string& label);

struct RealPoint {
  double y;
};
struct TorusPoint {
  std::vector<double> theta;
};

class GluedPoint {
 public:
  using Variant = std::variant<RealPoint, TorusPoint>;

  /// y must be finite and nonzero.
  static GluedPoint real(double y);
  /// Angles must lie in [0, 2 pi).
  static GluedPoint torus(std::vector<double> theta);
  /// As torus(), reducing each angle mod 2 pi first.
  static GluedPoint torus_wrapped(std::vector<double> theta);

  const Variant& variant() const noexcept { return v_; }
  bool is_real() const noexcept { return std::holds_alternative<RealPoint>(v_); }
  double y() const { return std::get<RealPoint>(v_).y; }
  const std::vector<double>& theta() const { return std::get<TorusPoint>(v_).theta; }

  std::string describe() const;

 private:
  explicit GluedPoint(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Parses "real:2.0" or "torus:0.1,3.0" ("torus:" alone is the rank-0 point).
GluedPoint parse_point(const std::string& s);

/// The C_0 summand: a function on R vanishing at 0 and at infinity.
struct F0 {
  std::string kind;            // zero | bump | frt | product
  std::vector<double> params;  // bump: center, width; frt: r, t
  std::function<Complex(double)> fn;

  Complex operator()(double y) const { return fn ? fn(y) : Complex{}; }
};

F0 f0_zero();
/// exp(1 - 1/(1 - ((y - center)/width)^2)) on |y - center| < width; needs |center| > width.
F0 f0_bump(double center, double width);
/// y -> f_{r,t}(y).
F0 f0_frt(double r, double t);

struct LatticeTerm {
  Complex coeff;
  std::vector<long> n;  // integer coordinates of the frequency over the basis
};

/// g = f0 + f1 with f1 = sum a_j chi_{<n_j, b>}.
class AlgebraElement {
 public:
  /// Spot-checks f0 at {0, +-1e3, +-1e6} against eps_tail (AlgebraMembership)
  /// and merges terms with equal coordinates. Throws RankMismatch.
  static AlgebraElement make(NumericBasis basis, F0 f0, std::vector<LatticeTerm> f1,
                             double eps_tail = 1e-2);

  const NumericBasis& basis() const noexcept { return basis_; }
  const F0& f0() const noexcept { return f0_; }
  const std::vector<LatticeTerm>& f1() const noexcept { return f1_; }

  double frequency(const LatticeTerm& t) const;
  Complex f1_at_real(double y) const;
  Complex f1_at_torus(const std::vector<double>& theta) const;

  /// Cross terms f0 f1' + f1 f0' are folded into the f0 summand.
  friend AlgebraElement operator*(const AlgebraElement& g, const AlgebraElement& h);

 private:
  AlgebraElement(NumericBasis b, F0 f0, std::vector<LatticeTerm> f1)
      : basis_(std::move(b)), f0_(std::move(f0)), f1_(std::move(f1)) {}
  NumericBasis basis_;
  F0 f0_;
  std::vector<LatticeTerm> f1_;
};

/// Real y: f0(y) + f1(y). Torus theta: sum a_j exp(i <n_j, theta>).
Complex evaluate(const GluedPoint& pt, const AlgebraElement& g);

/// c != 0 -> Real c; c = 0 -> the torus identity.
GluedPoint iota(double c, const NumericBasis& basis);

struct Interval {
  double lo;
  double hi;
};

struct Disc {
  Complex center;
  double radius;
};

/// Open interval union in Y = R \ {0}.
struct Type1Set {
  std::vector<Interval> intervals;
};
/// (Y \ K) together with the whole torus, K a finite union of closed intervals avoiding 0.
struct Type2Set {
  std::vector<Interval> compact;
};
/// Preimage of a union of open discs under f in the almost periodic summand
/// (the f0 part of the element is ignored).
struct Type3Set {
  AlgebraElement f;
  std::vector<Disc> discs;
};

using SubbasisSet = std::variant<Type1Set, Type2Set, Type3Set>;

/// Validating constructors.
SubbasisSet type1(std::vector<Interval> intervals);
SubbasisSet type2(std::vector<Interval> compact);
SubbasisSet type3(AlgebraElement f, std::vector<Disc> discs);

bool in_subbasis(const GluedPoint& pt, const SubbasisSet& S);

struct ConvergenceCertificate {
  bool converges = false;
  /// Per neighborhood: first index N with iota(c_n) in S for all n >= N
  /// (sequence length if the last term is outside).
  std::vector<std::size_t> entry_index;
};

/// Finite-family certificate: every S must contain iota(c_n) from some N on,
/// with the in-set tail covering at least the last half of the sequence.
/// This does not prove topological convergence. Throws
/// TargetNotInNeighborhood, and ValidationError for sequences shorter than
/// min_terms.
ConvergenceCertificate convergence_certificate(const std::vector<double>& seq,
                                               const GluedPoint& target,
                                               const std::vector<SubbasisSet>& nbhd,
                                               const NumericBasis& basis,
                                               std::size_t min_terms = 1000);
bool converges(const std::vector<double>& seq, const GluedPoint& target,
               const std::vector<SubbasisSet>& nbhd, const NumericBasis& basis);

/// Sequence generators for the CLI: "2pi*n", "n", "<k>*n", "<a>+1/n"; n = 1..count.
std::vector<double> generate_sequence(const std::string& spec, long count);

}  // namespace holab
