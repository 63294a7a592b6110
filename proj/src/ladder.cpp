#include "phaseweb/ladder.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace phaseweb {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRows = std::vector<std::vector<BigInt>>;

BigRows to_big(const IntegerMatrix& m) {
  BigRows rows(static_cast<std::size_t>(m.rows()),
               std::vector<BigInt>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return rows;
}

// Bareiss elimination in place. Returns the pivot columns in row order; the
// first pivots.size() rows are then an echelon form of the input.
std::vector<std::size_t> bareiss(BigRows& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  BigInt previous = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / previous;
      a[i][c] = 0;
    }
    previous = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t exact_rank(const IntegerMatrix& m) {
  auto rows = to_big(m);
  return bareiss(rows).size();
}

IntegerMatrix kernel_basis(const IntegerMatrix& m) {
  const auto cols = static_cast<std::size_t>(m.cols());
  auto a = to_big(m);
  const auto pivots = bareiss(a);
  const std::size_t rank = pivots.size();

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<BigInt>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    // Back substitution with x_free = D, where D is a common multiple of the
    // pivots so the solution stays integral; then strip the content.
    BigInt scale = 1;
    for (std::size_t i = 0; i < rank; ++i) scale *= a[i][pivots[i]];
    if (scale < 0) scale = -scale;
    std::vector<BigInt> x(cols, 0);
    x[free] = scale;
    for (std::size_t ii = rank; ii-- > 0;) {
      const std::size_t pc = pivots[ii];
      BigInt acc = 0;
      for (std::size_t j = pc + 1; j < cols; ++j) acc += a[ii][j] * x[j];
      if (acc % a[ii][pc] != 0) throw std::logic_error("kernel back substitution not integral");
      x[pc] = -acc / a[ii][pc];
    }
    BigInt g = 0;
    for (const auto& v : x) g = boost::multiprecision::gcd(g, v);
    if (g != 0)
      for (auto& v : x) v /= g;
    basis.push_back(std::move(x));
  }

  IntegerMatrix out(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t i = 0; i < cols; ++i) {
      const BigInt& v = basis[k][i];
      if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("kernel basis entry exceeds 64 bits");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = static_cast<std::int64_t>(v);
    }
  }
  return out;
}

bool LadderReport::all_exact() const {
  return !exact.empty() && std::all_of(exact.begin(), exact.end(), [](bool b) { return b; });
}

bool LadderReport::all_twisted() const {
  return !twisted.empty() && std::all_of(twisted.begin(), twisted.end(), [](bool b) { return b; });
}

bool LadderReport::ok() const {
  return boundary_squares_to_zero && coboundary_squares_to_zero && transpose_pairing &&
         all_exact() && all_twisted();
}

LadderReport verify_ladder(int n) {
  if (n < kLadderMinDimension || n > kLadderMaxDimension)
    throw std::out_of_range("verify_ladder supports n in 1.." +
                            std::to_string(kLadderMaxDimension) + ", got " + std::to_string(n));
  LadderReport report;
  report.n = n;
  for (int k = 0; k <= n; ++k) report.dims.push_back(binomial(n, k));

  // boundary[k] : grade k -> k-1 for k = 1..n ; coboundary[k] : grade k -> k+1 for k = 0..n-1
  std::vector<IntegerMatrix> bd(static_cast<std::size_t>(n + 1));
  std::vector<IntegerMatrix> cobd(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) bd[static_cast<std::size_t>(k)] = boundary_operator(n, k).matrix;
  for (int k = 0; k < n; ++k) cobd[static_cast<std::size_t>(k)] = coboundary_operator(n, k).matrix;

  report.boundary_squares_to_zero = true;
  for (int k = 2; k <= n; ++k) {
    const IntegerMatrix composed = bd[static_cast<std::size_t>(k - 1)] * bd[static_cast<std::size_t>(k)];
    if (!composed.isZero()) report.boundary_squares_to_zero = false;
  }
  report.coboundary_squares_to_zero = true;
  for (int k = 0; k + 1 < n; ++k) {
    const IntegerMatrix composed = cobd[static_cast<std::size_t>(k + 1)] * cobd[static_cast<std::size_t>(k)];
    if (!composed.isZero()) report.coboundary_squares_to_zero = false;
  }

  for (int k = 1; k <= n; ++k) report.boundary_ranks.push_back(exact_rank(bd[static_cast<std::size_t>(k)]));
  for (int k = 0; k < n; ++k) report.coboundary_ranks.push_back(exact_rank(cobd[static_cast<std::size_t>(k)]));

  report.transpose_pairing = true;
  for (int k = 1; k <= n; ++k)
    if (report.boundary_ranks[static_cast<std::size_t>(k - 1)] !=
        report.coboundary_ranks[static_cast<std::size_t>(k - 1)])
      report.transpose_pairing = false;

  auto rank_out_of = [&](int k) -> std::size_t {  // rank of boundary leaving grade k, 0 outside 1..n
    return (k >= 1 && k <= n) ? report.boundary_ranks[static_cast<std::size_t>(k - 1)] : 0;
  };
  // Augmented complex: dim C_k = rank(out of k) + rank(into k) at every grade.
  for (int k = 0; k <= n; ++k)
    report.exact.push_back(rank_out_of(k) + rank_out_of(k + 1) == report.dims[static_cast<std::size_t>(k)]);

  for (int k = 1; k <= n; ++k) {
    const auto& boundary_k = bd[static_cast<std::size_t>(k)];
    const auto& coboundary_below = cobd[static_cast<std::size_t>(k - 1)];
    const IntegerMatrix kernel = kernel_basis(boundary_k);
    const std::size_t kernel_dim = static_cast<std::size_t>(kernel.cols());
    report.kernel_dims.push_back(kernel_dim);
    const std::size_t image_rank = report.coboundary_ranks[static_cast<std::size_t>(k - 1)];

    IntegerMatrix joined(boundary_k.cols(), kernel.cols() + coboundary_below.cols());
    joined << kernel, coboundary_below;
    const bool trivial_intersection = exact_rank(joined) == kernel_dim + image_rank;
    const bool complementary = kernel_dim + image_rank == report.dims[static_cast<std::size_t>(k)];
    report.twisted.push_back(trivial_intersection && complementary);
  }
  return report;
}

}  // namespace phaseweb

namespace phaseweb {

IdentityReport verify_identities(int n) {
  if (n < kLadderMinDimension || n > kLadderMaxDimension)
    throw std::out_of_range("verify_identities supports n in 1.." + std::to_string(kLadderMaxDimension) +
                            ", got " + std::to_string(n));
  IdentityReport r;
  r.n = n;
  auto fail = [&r](std::string what) {
    if (r.failures.size() < 16) r.failures.push_back(std::move(what));
  };
  const auto one = MultivectorI::scalar(n, 1);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const auto si = MultivectorI::axis(n, i);
      const auto sj = MultivectorI::axis(n, j);
      const Blade ij = Blade::from_indices({i, j});
      const auto bij = MultivectorI::blade(n, ij);
      ++r.rotation_cases;
      if ((si + sj) * bij != sj - si) fail("rotation " + to_string(ij));
      ++r.sandwich_cases;
      if (apply_action(ij, si + sj) != -(si + sj)) fail("sandwich " + to_string(ij));
      ++r.bivector_square_cases;
      if (bij * bij != -one) fail("square " + to_string(ij));
    }
  }
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    const Blade b = Blade::from_mask(mask);
    const auto x = MultivectorI::blade(n, b);
    if (b.grade() >= 1) {
      ++r.boundary_identity_cases;
      if (!boundary_identity_check(b, n)) fail("boundary identity " + to_string(b));
    }
    ++r.nilpotent_cases;
    if (!boundary(boundary(x)).is_zero()) fail("boundary twice " + to_string(b));
    if (!coboundary(coboundary(x)).is_zero()) fail("coboundary twice " + to_string(b));
  }
  return r;
}

}  // namespace phaseweb
