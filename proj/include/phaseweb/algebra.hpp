#pragma once

// Discrete Clifford algebra Cl(n) over n orthonormal sensor axes.
//
// Multivectors are dense coefficient vectors indexed by blade bitmask
// (bit i-1 set <=> axis s_i present), templated on the coefficient type.
// Every identity used by the engine is integral, so the default scalar is
// std::int64_t and all comparisons are exact.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phaseweb {

inline constexpr int kMaxDimension = 16;

/// Square of every basis vector. The worked identities all assume +1.
enum class Signature : int { positive = 1, negative = -1 };

class Blade {
 public:
  constexpr Blade() = default;
  static constexpr Blade from_mask(std::uint32_t mask) { return Blade(mask); }
  static constexpr Blade scalar() { return Blade(0); }
  static constexpr Blade axis(int index) { return Blade(std::uint32_t{1} << (index - 1)); }

  /// Indices are 1-based and must be strictly increasing.
  static Blade from_indices(std::span<const int> indices) {
    std::uint32_t mask = 0;
    int previous = 0;
    for (int i : indices) {
      if (i < 1 || i > kMaxDimension) {
        throw std::out_of_range("blade index " + std::to_string(i) + " outside 1.." +
                                std::to_string(kMaxDimension));
      }
      if (i <= previous) throw std::invalid_argument("blade indices must be strictly increasing");
      mask |= std::uint32_t{1} << (i - 1);
      previous = i;
    }
    return Blade(mask);
  }
  static Blade from_indices(std::initializer_list<int> indices) {
    return from_indices(std::span<const int>(indices.begin(), indices.size()));
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr int grade() const { return std::popcount(mask_); }
  constexpr bool contains(int index) const { return (mask_ >> (index - 1)) & 1u; }
  constexpr int highest_index() const { return mask_ == 0 ? 0 : 32 - std::countl_zero(mask_); }
  constexpr bool fits(int dimension) const { return highest_index() <= dimension; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 1; i <= 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  constexpr auto operator<=>(const Blade&) const = default;

 private:
  constexpr explicit Blade(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

/// Lexicographic order on the index lists, the ordering used for every basis.
inline bool lex_less(Blade a, Blade b) {
  const auto ia = a.indices();
  const auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

inline std::string to_string(Blade b) {
  if (b.grade() == 0) return "1";
  std::string out;
  for (int i : b.indices()) out += "s" + std::to_string(i);
  return out;
}

struct SignedBlade {
  int sign = 1;
  Blade blade;
  friend bool operator==(const SignedBlade&, const SignedBlade&) = default;
};

inline void check_blade(Blade b, int dimension) {
  if (dimension < 0 || dimension > kMaxDimension)
    throw std::out_of_range("dimension " + std::to_string(dimension) + " unsupported");
  if (!b.fits(dimension))
    throw std::out_of_range("blade " + to_string(b) + " outside Cl(" + std::to_string(dimension) +
                            ")");
}

/// Product of two canonical blades: sign from the adjacent transpositions
/// needed to sort the concatenated index list, times s_i^2 for each shared axis.
inline SignedBlade blade_product(Blade a, Blade b, int dimension,
                                 Signature signature = Signature::positive) {
  check_blade(a, dimension);
  check_blade(b, dimension);
  int swaps = 0;
  for (std::uint32_t rest = b.mask(); rest != 0; rest &= rest - 1) {
    const std::uint32_t bit = rest & (~rest + 1);
    // every axis of a above this axis of b has to be crossed
    swaps += std::popcount(a.mask() & ~((bit << 1) - 1));
  }
  int sign = (swaps % 2 == 0) ? 1 : -1;
  if (signature == Signature::negative && std::popcount(a.mask() & b.mask()) % 2 == 1) sign = -sign;
  return {sign, Blade::from_mask(a.mask() ^ b.mask())};
}

/// All grade-k blades of Cl(n) in lexicographic order of their index lists.
inline std::vector<Blade> blade_basis(int dimension, int grade) {
  std::vector<Blade> out;
  if (grade < 0 || grade > dimension) return out;
  std::vector<int> idx(static_cast<std::size_t>(grade));
  for (int i = 0; i < grade; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(Blade::from_indices(std::span<const int>(idx)));
    int pos = grade - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == dimension - grade + pos + 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < grade; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

template <typename Scalar = std::int64_t>
class Multivector {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Multivector(int dimension, Signature signature = Signature::positive)
      : dimension_(dimension), signature_(signature) {
    if (dimension < 0 || dimension > kMaxDimension)
      throw std::out_of_range("dimension " + std::to_string(dimension) + " unsupported");
    coeffs_ = Coefficients::Zero(Eigen::Index{1} << dimension);
  }

  static Multivector scalar(int dimension, Scalar value,
                            Signature signature = Signature::positive) {
    Multivector m(dimension, signature);
    m.coeffs_(0) = value;
    return m;
  }
  /// The unit vector s_index, optionally scaled.
  static Multivector axis(int dimension, int index, Scalar value = Scalar(1),
                          Signature signature = Signature::positive) {
    return blade(dimension, Blade::axis(index), value, signature);
  }
  static Multivector blade(int dimension, Blade b, Scalar value = Scalar(1),
                           Signature signature = Signature::positive) {
    check_blade(b, dimension);
    Multivector m(dimension, signature);
    m.coeffs_(b.mask()) = value;
    return m;
  }

  int dimension() const { return dimension_; }
  Signature signature() const { return signature_; }
  const Coefficients& coefficients() const { return coeffs_; }

  Scalar coefficient(Blade b) const {
    check_blade(b, dimension_);
    return coeffs_(b.mask());
  }
  void add_term(Blade b, Scalar value) {
    check_blade(b, dimension_);
    coeffs_(b.mask()) += value;
  }

  bool is_zero() const { return (coeffs_.array() == Scalar(0)).all(); }

  /// Nonzero terms, ordered by grade and then lexicographically.
  std::vector<std::pair<Blade, Scalar>> terms() const {
    std::vector<std::pair<Blade, Scalar>> out;
    for (int k = 0; k <= dimension_; ++k)
      for (Blade b : blade_basis(dimension_, k))
        if (coeffs_(b.mask()) != Scalar(0)) out.emplace_back(b, coeffs_(b.mask()));
    return out;
  }

  Multivector grade_part(int k) const {
    Multivector out(dimension_, signature_);
    for (Eigen::Index m = 0; m < coeffs_.size(); ++m)
      if (std::popcount(static_cast<std::uint32_t>(m)) == k) out.coeffs_(m) = coeffs_(m);
    return out;
  }

  /// Highest grade carrying a nonzero coefficient, -1 for zero.
  int max_grade() const {
    int g = -1;
    for (Eigen::Index m = 0; m < coeffs_.size(); ++m)
      if (coeffs_(m) != Scalar(0)) g = std::max(g, std::popcount(static_cast<std::uint32_t>(m)));
    return g;
  }

  Multivector& operator+=(const Multivector& o) {
    check_compatible(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_compatible(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  Multivector& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) {
    a.coeffs_ = -a.coeffs_;
    return a;
  }
  friend Multivector operator*(Multivector a, Scalar s) { return a *= s; }
  friend Multivector operator*(Scalar s, Multivector a) { return a *= s; }

  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.dimension_ == b.dimension_ && a.signature_ == b.signature_ && a.coeffs_ == b.coeffs_;
  }

  void check_compatible(const Multivector& o) const {
    if (o.dimension_ != dimension_)
      throw std::invalid_argument("dimension mismatch: Cl(" + std::to_string(dimension_) +
                                  ") vs Cl(" + std::to_string(o.dimension_) + ")");
    if (o.signature_ != signature_) throw std::invalid_argument("signature mismatch");
  }

 private:
  int dimension_;
  Signature signature_;
  Coefficients coeffs_;
};

using MultivectorI = Multivector<std::int64_t>;

template <typename Scalar>
std::string to_string(const Multivector<Scalar>& x) {
  const auto terms = x.terms();
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : terms) {
    const bool negative = c < Scalar(0);
    const Scalar mag = negative ? Scalar(-c) : c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    if (b.grade() == 0) {
      os << mag;
    } else {
      if (mag != Scalar(1)) os << mag;
      os << to_string(b);
    }
    first = false;
  }
  return os.str();
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Multivector<Scalar>& x) {
  return os << to_string(x);
}

template <typename Scalar>
Multivector<Scalar> geometric_product(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  x.check_compatible(y);
  const auto& cx = x.coefficients();
  const auto& cy = y.coefficients();
  Multivector<Scalar> out(x.dimension(), x.signature());
  for (Eigen::Index i = 0; i < cx.size(); ++i) {
    if (cx(i) == Scalar(0)) continue;
    for (Eigen::Index j = 0; j < cy.size(); ++j) {
      if (cy(j) == Scalar(0)) continue;
      const auto p = blade_product(Blade::from_mask(static_cast<std::uint32_t>(i)),
                                   Blade::from_mask(static_cast<std::uint32_t>(j)), x.dimension(),
                                   x.signature());
      out.add_term(p.blade, p.sign > 0 ? cx(i) * cy(j) : Scalar(-(cx(i) * cy(j))));
    }
  }
  return out;
}

template <typename Scalar>
Multivector<Scalar> operator*(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  return geometric_product(x, y);
}

/// Reverses the factor order of every blade: grade k picks up (-1)^{k(k-1)/2}.
template <typename Scalar>
Multivector<Scalar> reverse(const Multivector<Scalar>& x) {
  Multivector<Scalar> out(x.dimension(), x.signature());
  for (const auto& [b, c] : x.terms()) {
    const int k = b.grade();
    out.add_term(b, ((k * (k - 1) / 2) % 2 == 0) ? c : Scalar(-c));
  }
  return out;
}

/// Sandwich action * state * reverse(action). For a grade-2 action this is
/// the 180 degree rotation in the action's plane.
template <typename Scalar>
Multivector<Scalar> apply_action(Blade action, const Multivector<Scalar>& state) {
  if (action.grade() < 2)
    throw std::invalid_argument("action blade must have grade >= 2, got " + to_string(action));
  const auto a = Multivector<Scalar>::blade(state.dimension(), action, Scalar(1), state.signature());
  return geometric_product(geometric_product(a, state), reverse(a));
}

/// Drop one factor at a time, in order, with alternating sign. Grade-1
/// blades go to the scalar 1; scalars go to 0.
template <typename Scalar>
Multivector<Scalar> boundary(const Multivector<Scalar>& x) {
  Multivector<Scalar> out(x.dimension(), x.signature());
  for (const auto& [b, c] : x.terms()) {
    const auto idx = b.indices();
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const Blade face = Blade::from_mask(b.mask() & ~Blade::axis(idx[j]).mask());
      out.add_term(face, (j % 2 == 0) ? c : Scalar(-c));
    }
  }
  return out;
}

/// Adjoint of boundary under the orthonormal blade pairing: every blade b
/// gains each missing axis j with the sign that j's face carries in
/// boundary(b + s_j). Top-grade terms vanish.
template <typename Scalar>
Multivector<Scalar> coboundary(const Multivector<Scalar>& x) {
  Multivector<Scalar> out(x.dimension(), x.signature());
  for (const auto& [b, c] : x.terms()) {
    for (int j = 1; j <= x.dimension(); ++j) {
      if (b.contains(j)) continue;
      const int position = std::popcount(b.mask() & (Blade::axis(j).mask() - 1));
      out.add_term(Blade::from_mask(b.mask() | Blade::axis(j).mask()),
                   (position % 2 == 0) ? c : Scalar(-c));
    }
  }
  return out;
}

/// True iff boundary(b) == (sum of b's axes) * b.
inline bool boundary_identity_check(Blade b, int dimension,
                                    Signature signature = Signature::positive) {
  check_blade(b, dimension);
  if (b.grade() < 1) throw std::invalid_argument("boundary identity needs grade >= 1");
  const auto blade = MultivectorI::blade(dimension, b, 1, signature);
  MultivectorI axes(dimension, signature);
  for (int i : b.indices()) axes.add_term(Blade::axis(i), 1);
  return boundary(blade) == geometric_product(axes, blade);
}

// ---------------------------------------------------------------------------
// Graded operators as integer matrices over the lexicographic blade bases.

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = std::int64_t>
struct GradedOperator {
  int source_grade = 0;
  int target_grade = 0;
  MatrixX<Scalar> matrix;  // C(n, target) x C(n, source)
};

/// Coordinates of the grade-k part of x in the lexicographic basis.
template <typename Scalar>
VectorX<Scalar> grade_coordinates(const Multivector<Scalar>& x, int k) {
  const auto basis = blade_basis(x.dimension(), k);
  VectorX<Scalar> v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = x.coefficient(basis[i]);
  return v;
}

template <typename Scalar>
Multivector<Scalar> from_grade_coordinates(int dimension, int k, const VectorX<Scalar>& v,
                                           Signature signature = Signature::positive) {
  const auto basis = blade_basis(dimension, k);
  if (static_cast<std::size_t>(v.size()) != basis.size())
    throw std::invalid_argument("coordinate vector does not match grade basis");
  Multivector<Scalar> out(dimension, signature);
  for (std::size_t i = 0; i < basis.size(); ++i) out.add_term(basis[i], v(static_cast<Eigen::Index>(i)));
  return out;
}

/// Matrix of the boundary from grade k to grade k-1 (k >= 1). For k = 1 this
/// is the all-ones augmentation onto the scalars.
template <typename Scalar = std::int64_t>
GradedOperator<Scalar> boundary_operator(int dimension, int k) {
  if (k < 1 || k > dimension) throw std::out_of_range("boundary grade out of range");
  const auto source = blade_basis(dimension, k);
  const auto target = blade_basis(dimension, k - 1);
  GradedOperator<Scalar> op{k, k - 1,
                            MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(target.size()),
                                                  static_cast<Eigen::Index>(source.size()))};
  for (std::size_t col = 0; col < source.size(); ++col) {
    const auto image = boundary(Multivector<Scalar>::blade(dimension, source[col]));
    op.matrix.col(static_cast<Eigen::Index>(col)) = grade_coordinates(image, k - 1);
  }
  return op;
}

/// Matrix of the coboundary from grade k to k+1: the transpose of the
/// boundary from k+1 to k.
template <typename Scalar = std::int64_t>
GradedOperator<Scalar> coboundary_operator(int dimension, int k) {
  if (k < 0 || k >= dimension) throw std::out_of_range("coboundary grade out of range");
  auto op = boundary_operator<Scalar>(dimension, k + 1);
  return {k, k + 1, op.matrix.transpose()};
}

}  // namespace phaseweb
