#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace holab {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <typename Int>
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

/// Coordinates of a length over the declared Q-independent basis.
using RationalVector = std::vector<Rational>;

namespace lattice_detail {

template <typename Int>
Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

template <typename Int>
void row_axpy(IntMatrix<Int>& A, Eigen::Index dst, const Int& q, Eigen::Index src) {
  if (q == 0) return;
  for (Eigen::Index j = 0; j < A.cols(); ++j) A(dst, j) -= q * A(src, j);
}

}  // namespace lattice_detail

/// Row-style Hermite normal form of the lattice spanned by the rows of A:
/// echelon rows with positive pivots, entries above a pivot in [0, pivot),
/// zero rows dropped. Two integer matrices span the same row lattice iff
/// their HNFs coincide.
template <typename Int>
IntMatrix<Int> hermite_normal_form(IntMatrix<Int> A) {
  using lattice_detail::floor_div;
  using lattice_detail::row_axpy;
  using std::abs;
  Eigen::Index r = 0;
  for (Eigen::Index col = 0; col < A.cols() && r < A.rows(); ++col) {
    for (;;) {
      // Move the smallest nonzero entry of this column (rows r..) to row r.
      Eigen::Index best = -1;
      for (Eigen::Index i = r; i < A.rows(); ++i) {
        if (A(i, col) == 0) continue;
        if (best < 0 || abs(A(i, col)) < abs(A(best, col))) best = i;
      }
      if (best < 0) break;
      if (best != r) A.row(r).swap(A.row(best));
      bool done = true;
      for (Eigen::Index i = r + 1; i < A.rows(); ++i) {
        if (A(i, col) == 0) continue;
        row_axpy(A, i, Int(A(i, col) / A(r, col)), r);
        if (A(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (r >= A.rows() || A(r, col) == 0) continue;
    if (A(r, col) < 0) A.row(r) = (-A.row(r)).eval();
    for (Eigen::Index i = 0; i < r; ++i) row_axpy(A, i, floor_div(A(i, col), A(r, col)), r);
    ++r;
  }
  return A.topRows(r);
}

/// Solves x H = v over the integers for H in Hermite normal form.
template <typename Int>
bool hnf_contains(const IntMatrix<Int>& H, std::vector<Int> v) {
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    Eigen::Index p = 0;
    while (H(i, p) == 0) ++p;
    if (v[p] % H(i, p) != 0) return false;
    const Int q = v[p] / H(i, p);
    for (Eigen::Index j = 0; j < H.cols(); ++j) v[j] -= q * H(i, j);
  }
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

struct FiniteLengths {
  std::vector<std::string> basis_labels;
  std::vector<RationalVector> elements;
};

/// span_Z is all of R.
struct FullLine {};

/// All l0 / 2^n, n >= 0: the lengths produced by repeated subdivision.
struct DyadicSpan {
  std::vector<std::string> basis_labels;
  RationalVector generator;
};

class LengthSet {
 public:
  using Variant = std::variant<FiniteLengths, FullLine, DyadicSpan>;

  /// Validates: distinct labels, equal dimensions, no zero element.
  /// The basis labels are taken to be Q-linearly independent; this is
  /// asserted by the caller, not checked.
  static LengthSet finite(std::vector<std::string> basis_labels,
                          std::vector<RationalVector> elements);
  static LengthSet full_line();
  static LengthSet dyadic(std::vector<std::string> basis_labels, RationalVector generator);

  const Variant& variant() const noexcept { return v_; }
  bool is_finite() const noexcept { return std::holds_alternative<FiniteLengths>(v_); }
  bool is_full_line() const noexcept { return std::holds_alternative<FullLine>(v_); }
  bool is_dyadic() const noexcept { return std::holds_alternative<DyadicSpan>(v_); }
  const std::vector<std::string>* basis_labels() const;

  std::string describe() const;

 private:
  explicit LengthSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// HNF of the generators after clearing denominators, together with the
/// common denominator D (the lattice is H / D).
struct LatticeBasis {
  IntMatrix<BigInt> hnf;
  BigInt denominator;
};

LatticeBasis lattice_basis(const FiniteLengths& L);

/// Throws BasisMismatch if a Finite or Dyadic L is over a different basis.
bool zspan_member(const RationalVector& l, const LengthSet& L,
                  const std::vector<std::string>& basis_labels);
bool zspan_subset(const LengthSet& L1, const LengthSet& L2);
bool same_span(const LengthSet& L1, const LengthSet& L2);

/// True iff q = a / 2^n for integers a, n >= 0.
bool is_dyadic_rational(const Rational& q);

/// Exception 1 flag for the natural map iota_1: some two generators have an
/// irrational ratio (under the declared basis).
bool iota_injective(const LengthSet& L);

enum class VerdictTag { ExtendsInjectively, ExtendsNonInjectively, NoExtension, Unknown };

struct Verdict {
  VerdictTag tag;
  std::optional<std::string> witness;

  /// "++", "+", "-", "?".
  std::string symbol() const;
};

std::string to_string(VerdictTag t);
VerdictTag verdict_tag_from_string(const std::string& s);

Verdict embed_verdict(const LengthSet& L_cosm, const LengthSet& L_grav, bool grav_has_nonstraight);

struct MatrixCell {
  std::string row;
  std::string column;
  Verdict verdict;
  std::string expected;  // table symbol: ++, +, - or blank
  std::optional<int> exception;
  std::string exception_text;
  /// Only meaningful for non-exception cells.
  bool matches_expected = true;
};

struct ConstellationMatrix {
  std::string preset;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<bool> column_iota_injective;
  std::vector<MatrixCell> cells;  // row-major

  const MatrixCell& at(std::size_t row, std::size_t col) const {
    return cells[row * columns.size() + col];
  }
  std::size_t mismatches() const;
};

struct MatrixScenario {
  /// The non-PL graph row G_Gamma contains a circle arc, so the non-AP
  /// witness settles it (otherwise the cells stay Unknown).
  bool gamma_includes_circle = false;
};

/// Presets: "paper" and "paper-circle". Throws ValidationError otherwise.
ConstellationMatrix constellation_matrix(const std::string& preset);
ConstellationMatrix constellation_matrix(const MatrixScenario& scenario, const std::string& name);

/// Parsers for the CLI formats: basis "1,sqrt2,pi", vectors "1,0;0,1/2".
std::vector<std::string> parse_basis_labels(const std::string& s);
Rational parse_rational(const std::string& s);
RationalVector parse_rational_vector(const std::string& s);
std::vector<RationalVector> parse_rational_vectors(const std::string& s);
std::string to_string(const RationalVector& v);

}  // namespace holab
