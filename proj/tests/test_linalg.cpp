#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cslab/linalg.hpp"
#include "cslab/rng.hpp"

using cslab::Matrix;
using cslab::Vector;

namespace {

Matrix hand_matrix() {
  // [[1,0,1],[0,1,1]]
  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 0; a(0, 2) = 1;
  a(1, 0) = 0; a(1, 1) = 1; a(1, 2) = 1;
  return a;
}

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  cslab::RngStream s(seed, 0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) = cslab::sample_gaussian(s);
      m(j, i) = m(i, j);
    }
  return m;
}

} // namespace

TEST_CASE("gram_submatrix hand values") {
  const Matrix a = hand_matrix();

  const Matrix g13 = cslab::gram_submatrix(a, {1, 3});
  CHECK(g13(0, 0) == 1.0);
  CHECK(g13(0, 1) == 1.0);
  CHECK(g13(1, 0) == 1.0);
  CHECK(g13(1, 1) == 2.0);

  const Matrix g2 = cslab::gram_submatrix(a, {2});
  CHECK(g2(0, 0) == 1.0);

  Matrix ortho(2, 2);
  ortho(0, 0) = 3.0;
  ortho(1, 1) = -2.0;
  const Matrix g = cslab::gram_submatrix(ortho, {1, 2});
  CHECK(g(0, 1) == 0.0);
  CHECK(g(0, 0) == 9.0);
  CHECK(g(1, 1) == 4.0);

  CHECK_THROWS_AS(cslab::gram_submatrix(a, {0}), std::out_of_range);
  CHECK_THROWS_AS(cslab::gram_submatrix(a, {4}), std::out_of_range);
  CHECK_THROWS_AS(cslab::gram_submatrix(a, {}), std::invalid_argument);
}

TEST_CASE("jacobi eigenvalues on hand instances") {
  Matrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 2;
  const auto eig = cslab::jacobi_symmetric_eigen(m);
  CHECK(eig.eigenvalues[0] == Catch::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == Catch::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));

  const auto id = cslab::jacobi_symmetric_eigen(Matrix::identity(4));
  for (double v : id.eigenvalues) CHECK(v == 1.0);

  Matrix d(3, 3);
  d(0, 0) = 5; d(1, 1) = -3; d(2, 2) = 0;
  const auto ed = cslab::jacobi_symmetric_eigen(d);
  CHECK(ed.eigenvalues == Vector{5.0, 0.0, -3.0});

  Matrix bad(2, 2);
  bad(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(cslab::jacobi_symmetric_eigen(bad), std::invalid_argument);
}

TEST_CASE("jacobi invariants on random symmetric matrices") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Matrix m = random_symmetric(8, seed);
    const auto eig = cslab::jacobi_symmetric_eigen(m);
    const double fro = m.frobenius_norm();

    double trace = 0.0, sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < 8; ++i) trace += m(i, i);
    for (double v : eig.eigenvalues) {
      sum += v;
      sumsq += v * v;
    }
    CHECK(std::abs(sum - trace) <= 1e-10 * fro);
    CHECK(std::abs(sumsq - fro * fro) <= 1e-10 * fro * fro);

    // reconstruction M = V diag(lambda) V^T
    double worst = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 8; ++k)
          s += eig.eigenvectors(i, k) * eig.eigenvalues[k] * eig.eigenvectors(j, k);
        worst = std::max(worst, std::abs(s - m(i, j)));
      }
    CHECK(worst <= 1e-9 * fro);
  }
}

TEST_CASE("jacobi eigenvalues invariant under symmetric permutation") {
  const Matrix m = random_symmetric(6, 99);
  const std::size_t perm[6] = {3, 0, 5, 1, 4, 2};
  Matrix p(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) p(i, j) = m(perm[i], perm[j]);

  auto e1 = cslab::jacobi_symmetric_eigen(m, false).eigenvalues;
  auto e2 = cslab::jacobi_symmetric_eigen(p, false).eigenvalues;
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(e1[k] - e2[k]) < 1e-10);
}

TEST_CASE("operator_norm_sym") {
  Matrix offdiag(2, 2);
  offdiag(0, 1) = -2.5;
  offdiag(1, 0) = -2.5;
  CHECK(cslab::operator_norm_sym(offdiag) == Catch::Approx(2.5).epsilon(1e-12));

  CHECK(cslab::operator_norm_sym(Matrix(3, 3)) == 0.0);

  Matrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 2;
  CHECK(cslab::operator_norm_sym(m) ==
        Catch::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("nullspace of the hand matrix") {
  const auto ns = cslab::nullspace_basis(hand_matrix());
  REQUIRE(ns.basis.size() == 1);
  CHECK(ns.rank == 2);
  const Vector& v = ns.basis[0];
  CHECK(std::abs(cslab::norm2(v) - 1.0) < 1e-12);
  // v parallel to (1,1,-1)/sqrt(3)
  const double s = v[0] > 0 ? 1.0 : -1.0;
  CHECK(std::abs(s * v[0] - 1.0 / std::sqrt(3.0)) < 1e-10);
  CHECK(std::abs(s * v[1] - 1.0 / std::sqrt(3.0)) < 1e-10);
  CHECK(std::abs(s * v[2] + 1.0 / std::sqrt(3.0)) < 1e-10);
}

TEST_CASE("nullspace: full rank square, duplicated columns, zero matrix") {
  cslab::RngStream s(5, 0);
  Matrix sq(4, 4);
  for (auto& v : sq.data()) v = cslab::sample_gaussian(s);
  CHECK(cslab::nullspace_basis(sq).basis.empty());

  // duplicate columns 2 and 4 (1-based)
  Matrix dup(3, 5);
  for (auto& v : dup.data()) v = cslab::sample_gaussian(s);
  for (std::size_t i = 0; i < 3; ++i) dup(i, 3) = dup(i, 1);
  const auto ns = cslab::nullspace_basis(dup);
  REQUIRE(ns.basis.size() >= 1);
  // e_2 - e_4 lies in the kernel: its projection onto the basis must be itself
  Vector target(5, 0.0);
  target[1] = 1.0 / std::sqrt(2.0);
  target[3] = -1.0 / std::sqrt(2.0);
  Vector proj(5, 0.0);
  for (const auto& b : ns.basis) {
    const double c = cslab::dot(b, target);
    for (std::size_t i = 0; i < 5; ++i) proj[i] += c * b[i];
  }
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(proj[i] - target[i]) < 1e-9);

  const auto zns = cslab::nullspace_basis(Matrix(2, 3));
  CHECK(zns.basis.size() == 3);
}

TEST_CASE("nullspace basis is orthonormal, annihilated, and orthogonal to rows") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    cslab::RngStream s(seed, 0);
    Matrix a(4, 9);
    for (auto& v : a.data()) v = cslab::sample_gaussian(s);
    const auto ns = cslab::nullspace_basis(a);
    REQUIRE(ns.basis.size() == 5);
    const double fro = a.frobenius_norm();

    for (std::size_t p = 0; p < ns.basis.size(); ++p) {
      const Vector av = cslab::matvec(a, ns.basis[p]);
      CHECK(cslab::norm2(av) <= 1e-10 * fro);
      for (std::size_t q = 0; q < ns.basis.size(); ++q) {
        const double ip = cslab::dot(ns.basis[p], ns.basis[q]);
        CHECK(std::abs(ip - (p == q ? 1.0 : 0.0)) < 1e-12);
      }
      for (std::size_t row = 0; row < a.rows(); ++row) {
        Vector rvec(a.cols());
        for (std::size_t j = 0; j < a.cols(); ++j) rvec[j] = a(row, j);
        CHECK(std::abs(cslab::dot(ns.basis[p], rvec)) <= 1e-9 * cslab::norm2(rvec));
      }
    }
  }
}
