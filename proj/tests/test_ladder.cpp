#include "phaseweb/ladder.hpp"
#include "phaseweb/report_json.hpp"

#include <doctest.h>

using namespace phaseweb;

namespace {

// Oracle: rank modulo a large prime. The operators here have entries in
// {-1, 0, 1}, far below any size where the modular and rational ranks part.
std::size_t rank_mod_p(const IntegerMatrix& m) {
  constexpr std::int64_t p = 1'000'000'007;
  std::vector<std::vector<std::int64_t>> a(static_cast<std::size_t>(m.rows()),
                                           std::vector<std::int64_t>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a[i][j] = ((m(i, j) % p) + p) % p;
  auto inv = [](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < static_cast<std::size_t>(m.cols()) && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    const auto iv = inv(a[rank][c]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const auto f = a[r][c] * iv % p;
      for (std::size_t k = c; k < a[r].size(); ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

IntegerMatrix d(int n, int k) { return boundary_operator(n, k).matrix; }

}  // namespace

TEST_CASE("exact_rank on small matrices") {
  IntegerMatrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(exact_rank(m) == 2);
  CHECK(exact_rank(IntegerMatrix::Zero(2, 4)) == 0);
  CHECK(exact_rank(IntegerMatrix::Identity(5, 5)) == 5);
  CHECK(exact_rank(IntegerMatrix(0, 3)) == 0);
}

TEST_CASE("kernel_basis spans the null space") {
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto m = d(n, k);
      const auto K = kernel_basis(m);
      CHECK(K.cols() == m.cols() - static_cast<Eigen::Index>(exact_rank(m)));
      CHECK((m * K).isZero());
      CHECK(exact_rank(K) == static_cast<std::size_t>(K.cols()));
    }
}

TEST_CASE("verify_ladder worked examples") {
  const auto r3 = verify_ladder(3);
  CHECK(r3.dims == std::vector<std::size_t>{1, 3, 3, 1});
  CHECK(r3.boundary_ranks == std::vector<std::size_t>{1, 2, 1});
  CHECK(r3.all_exact());
  CHECK(r3.all_twisted());
  const auto r2 = verify_ladder(2);
  CHECK(r2.dims == std::vector<std::size_t>{1, 2, 1});
  CHECK(r2.boundary_ranks == std::vector<std::size_t>{1, 1});
  CHECK(r2.ok());
  const auto r1 = verify_ladder(1);
  CHECK(r1.dims == std::vector<std::size_t>{1, 1});
  CHECK(r1.boundary_ranks == std::vector<std::size_t>{1});
  CHECK(r1.ok());
}

TEST_CASE("verify_ladder range") {
  CHECK_THROWS_AS(verify_ladder(0), std::out_of_range);
  CHECK_THROWS_AS(verify_ladder(9), std::out_of_range);
}

TEST_CASE("ladder ranks agree with the modular oracle and the closed form C(n-1, k-1)") {
  for (int n = 2; n <= 6; ++n) {
    const auto r = verify_ladder(n);
    CHECK(r.ok());
    for (int k = 1; k <= n; ++k) {
      const auto oracle = rank_mod_p(d(n, k));
      CHECK(r.boundary_ranks[k - 1] == oracle);
      CHECK(oracle == binomial(n - 1, k - 1));
      CHECK(r.coboundary_ranks[k - 1] == rank_mod_p(coboundary_operator(n, k - 1).matrix));
    }
  }
}

TEST_CASE("twist: kernel and coboundary image are complementary (oracle)") {
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto K = kernel_basis(d(n, k));
      const auto C = coboundary_operator(n, k - 1).matrix;
      IntegerMatrix joined(K.rows(), K.cols() + C.cols());
      joined << K, C;
      const auto rk = rank_mod_p(K), rc = rank_mod_p(C);
      CHECK(rank_mod_p(joined) == rk + rc);     // trivial intersection
      CHECK(rk + rc == binomial(n, k));         // complementary dimensions
    }
}

TEST_CASE("verify_identities sweeps every case") {
  for (int n = 1; n <= 6; ++n) {
    const auto r = verify_identities(n);
    CHECK(r.ok());
    CHECK(r.rotation_cases == binomial(n, 2));
    CHECK(r.boundary_identity_cases == (std::size_t{1} << n) - 1);
  }
}

TEST_CASE("ladder report JSON carries the contract fields") {
  const auto j = to_json(verify_ladder(3));
  for (const char* key : {"n", "dims", "boundary_ranks", "coboundary_ranks", "exact", "twisted"})
    CHECK(j.contains(key));
  CHECK(j["dims"] == nlohmann::json::array({1, 3, 3, 1}));
}
