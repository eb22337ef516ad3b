#include <doctest.h>

#include <algorithm>
#include <random>

#include "femkit/linalg.hpp"
#include "support/oracles.hpp"

using namespace femkit;

namespace {

SparseMatrix laplace_4x4() {
  TripletList t(4, 4);
  for (Index i = 0; i < 4; ++i) {
    t.add(i, i, 10.0);
    if (i > 0) t.add(i, i - 1, -5.0);
    if (i < 3) t.add(i, i + 1, -5.0);
  }
  return finalize(t);
}

// Random sparse SPD matrix: banded random symmetric part plus a dominant diagonal.
SparseMatrix random_spd(Index n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<Index> col(0, n - 1);
  TripletList t(n, n);
  std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) {
      const Index j = col(rng);
      if (j == i) continue;
      const double v = u(rng);
      t.add(i, j, v);
      t.add(j, i, v);
      rowsum[i] += std::abs(v);
      rowsum[j] += std::abs(v);
    }
  }
  for (Index i = 0; i < n; ++i) t.add(i, i, rowsum[i] + 0.5 + std::abs(u(rng)));
  return finalize(t);
}

std::vector<double> random_vector(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("triplets: duplicates are summed, columns sorted, bounds checked") {
  TripletList t(2, 3);
  t.add(1, 2, 1.0);
  t.add(0, 1, 2.0);
  t.add(1, 2, 0.5);
  t.add(1, 0, -1.0);
  const SparseMatrix a = finalize(t);
  CHECK(a.nnz() == 3);
  CHECK(a.at(1, 2) == 1.5);
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.col_idx() == std::vector<Index>{1, 0, 2});
  CHECK_THROWS_AS(t.add(2, 0, 1.0), InputError);
  CHECK_THROWS_AS(t.add(0, -1, 1.0), InputError);
}

TEST_CASE("CG on the reduced 1D Laplace system returns 23/25 at the first node") {
  const std::vector<double> b{24.0 / 5, -1.0 / 5, -1.0 / 5, 24.0 / 5};
  const SolveResult r = cg_solve(laplace_4x4(), b);
  const double expected[] = {23.0 / 25, 22.0 / 25, 22.0 / 25, 23.0 / 25};
  for (int i = 0; i < 4; ++i) CHECK(r.x[i] == doctest::Approx(expected[i]).epsilon(1e-10));
  CHECK(r.report.method == "cg-jacobi");
  CHECK(r.report.iterations <= 4);
  const SolveResult lu = lu_solve(laplace_4x4(), b);
  for (int i = 0; i < 4; ++i) CHECK(lu.x[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("CG, LU and a dense oracle agree on random SPD systems") {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    const SparseMatrix a = random_spd(50, seed);
    const auto b = random_vector(50, seed + 100);
    const auto want = oracle::dense_solve(a.to_dense(), b);
    const auto cg = cg_solve(a, b, {1e-13, 0});
    const auto lu = lu_solve(a, b);
    CHECK(oracle::max_diff(cg.x, want) < 1e-10);
    CHECK(oracle::max_diff(lu.x, want) < 1e-12);
    CHECK(lu.report.residual_norm < 1e-12);
  }
}

TEST_CASE("LU solves nonsymmetric indefinite systems and reports singular pivots") {
  const Index n = 40;
  std::mt19937 rng(77u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TripletList t(n, n);
  for (Index i = 0; i < n; ++i) {
    t.add(i, (i + 1) % n, 3.0 + u(rng));
    t.add(i, i, u(rng));
    t.add(i, (i * 7 + 3) % n, u(rng));
  }
  const SparseMatrix a = finalize(t);
  const auto b = random_vector(n, 5u);
  const auto r = lu_solve(a, b);
  const auto ax = spmv(a, r.x);
  double res = 0.0;
  for (Index i = 0; i < n; ++i) res = std::max(res, std::abs(ax[i] - b[i]));
  CHECK(res < 1e-12);

  TripletList s(3, 3);
  s.add(0, 0, 1.0);
  s.add(0, 1, 2.0);
  s.add(1, 0, 2.0);
  s.add(1, 1, 4.0);
  s.add(2, 2, 1.0);
  CHECK_THROWS_AS(lu_solve(finalize(s), std::vector<double>{1, 2, 3}), NumericalError);
}

TEST_CASE("CG out of iterations raises SolveError with the best iterate") {
  const SparseMatrix a = random_spd(60, 9u);
  const auto b = random_vector(60, 10u);
  try {
    cg_solve(a, b, {1e-14, 2});
    FAIL("expected SolveError");
  } catch (const SolveError& e) {
    CHECK(e.best_iterate().size() == 60);
    CHECK(e.report().iterations == 2);
    CHECK(e.report().residual_norm > 0.0);
    CHECK(e.report().residual_norm < norm2(b));
  }
  TripletList t(2, 2);
  t.add(0, 1, 1.0);
  t.add(0, 0, 1.0);
  t.add(1, 1, 1.0);
  CHECK_THROWS_AS(cg_solve(finalize(t), std::vector<double>{1, 1}), NumericalError);
}

TEST_CASE("spmv is linear") {
  const SparseMatrix a = random_spd(30, 4u);
  const auto x = random_vector(30, 41u), y = random_vector(30, 42u);
  std::vector<double> z(30);
  for (int i = 0; i < 30; ++i) z[i] = 2.0 * x[i] - 3.0 * y[i];
  const auto ax = spmv(a, x), ay = spmv(a, y), az = spmv(a, z);
  for (int i = 0; i < 30; ++i) CHECK(az[i] == doctest::Approx(2.0 * ax[i] - 3.0 * ay[i]).epsilon(1e-13));
  CHECK_THROWS_AS(spmv(a, std::vector<double>(3)), InputError);
}

TEST_CASE("reverse Cuthill-McKee returns a permutation that does not widen the band") {
  const SparseMatrix a = random_spd(80, 12u);
  auto perm = reverse_cuthill_mckee(a);
  REQUIRE(perm.size() == 80);
  auto sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (Index i = 0; i < 80; ++i) CHECK(sorted[i] == i);
  CHECK(LuFactorization(a).size() == 80);
}

TEST_CASE("matrix utilities") {
  const SparseMatrix a = laplace_4x4();
  CHECK(asymmetry(a) == 0.0);
  CHECK(a.diagonal() == std::vector<double>(4, 10.0));
  const SparseMatrix i4 = SparseMatrix::identity(4);
  const SparseMatrix c = linear_combination({{2.0, &a}, {-1.0, &i4}});
  CHECK(c.at(0, 0) == 19.0);
  CHECK(c.at(0, 1) == -10.0);
  const std::vector<Index> keep{3, 1};
  const SparseMatrix s = submatrix(a, keep, keep);
  CHECK(s.rows() == 2);
  CHECK(s.at(0, 0) == 10.0);
  CHECK(s.at(0, 1) == 0.0);
  CHECK(a.transposed().to_dense() == a.to_dense());
  CHECK(norm2(std::vector<double>{3, 4}) == 5.0);
  CHECK(norm_inf(std::vector<double>{3, -4}) == 4.0);
}
