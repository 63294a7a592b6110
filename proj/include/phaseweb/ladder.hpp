#pragma once

// Homology/cohomology ladder checks for the full simplex on n axes.

#include "phaseweb/algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace phaseweb {

using IntegerMatrix = MatrixX<std::int64_t>;

/// Rank over the rationals, computed by fraction-free elimination on
/// arbitrary-precision integers.
std::size_t exact_rank(const IntegerMatrix& m);

/// Integer basis of the rational null space, one column per basis vector.
IntegerMatrix kernel_basis(const IntegerMatrix& m);

struct LadderReport {
  int n = 0;
  std::vector<std::size_t> dims;              // C(n,k), k = 0..n
  std::vector<std::size_t> boundary_ranks;    // rank of the boundary out of grade k, k = 1..n
  std::vector<std::size_t> coboundary_ranks;  // rank of the coboundary out of grade k, k = 0..n-1
  std::vector<std::size_t> kernel_dims;       // dim ker of the boundary out of grade k, k = 1..n
  bool boundary_squares_to_zero = false;
  bool coboundary_squares_to_zero = false;
  bool transpose_pairing = false;  // rank(boundary_k) == rank(coboundary_{k-1}) for every k
  std::vector<bool> exact;         // per grade k = 0..n, augmented complex
  std::vector<bool> twisted;       // per grade k = 1..n

  bool all_exact() const;
  bool all_twisted() const;
  bool ok() const;
};

inline constexpr int kLadderMinDimension = 1;
inline constexpr int kLadderMaxDimension = 8;

/// Throws std::out_of_range outside 1..8.
LadderReport verify_ladder(int n);

/// Exhaustive identity sweep over Cl(n). Each counter is the number of
/// cases checked; failures lists the first offenders.
struct IdentityReport {
  int n = 0;
  std::size_t rotation_cases = 0;        // (s_i + s_j) s_i s_j = -s_i + s_j
  std::size_t sandwich_cases = 0;        // s_i s_j (s_i + s_j) s_j s_i = -s_i - s_j
  std::size_t bivector_square_cases = 0; // (s_i s_j)^2 = -1
  std::size_t boundary_identity_cases = 0;
  std::size_t nilpotent_cases = 0;       // boundary and coboundary applied twice vanish
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Throws std::out_of_range outside 1..8.
IdentityReport verify_identities(int n);

}  // namespace phaseweb
