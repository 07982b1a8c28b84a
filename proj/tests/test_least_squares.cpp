#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "specrec/least_squares.hpp"

using namespace specrec;

namespace {

Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

// grow the state by the columns of B (in order) against rhs y
CholState grow(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& y, int upto) {
  CholState st;
  for (int k = 0; k < upto; ++k) {
    std::vector<cplx> gram(std::size_t(k) + 1);
    for (int i = 0; i < k; ++i) gram[std::size_t(i)] = B.col(i).dot(B.col(k));
    gram[std::size_t(k)] = B.col(k).squaredNorm();
    chol_insert(st, std::size_t(k), gram.data(), B.col(k).dot(y));
  }
  return st;
}

}  // namespace

TEST_SUITE("least_squares") {

TEST_CASE("first insertion takes a plain square root") {
  CholState st;
  cplx gram[1] = {cplx(4.0, 0.0)};
  chol_insert(st, 7, gram, cplx(8.0, 0.0));
  REQUIRE(st.size() == 1);
  CHECK(st.support[0] == 7);
  CHECK(std::abs(st.factor[0] - cplx(2.0, 0.0)) < 1e-15);
  const auto x = chol_solve(st);
  CHECK(std::abs(x[0] - cplx(2.0, 0.0)) < 1e-14);
}

TEST_CASE("orthonormal columns keep an identity factor") {
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(6, 4);
  Eigen::VectorXcd y(6);
  y << 1, 2, 3, 4, 5, 6;
  const CholState st = grow(B, y, 4);
  for (std::size_t i = 0, p = 0; i < 4; ++i)
    for (std::size_t c = 0; c <= i; ++c, ++p)
      CHECK(std::abs(st.factor[p] - (c == i ? cplx(1, 0) : cplx(0, 0))) < 1e-14);
  const auto x = chol_solve(st);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(x[std::size_t(i)] - y[i]) < 1e-14);
}

TEST_CASE("incremental factor matches a full refactorization") {
  const Eigen::MatrixXcd B = random_matrix(32, 16, 21);
  const Eigen::VectorXcd y = random_matrix(32, 1, 22);
  const CholState st = grow(B, y, 16);
  const Eigen::MatrixXcd gram = B.adjoint() * B;
  const Eigen::MatrixXcd L = Eigen::LLT<Eigen::MatrixXcd>(gram).matrixL();
  std::size_t p = 0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t c = 0; c <= i; ++c, ++p)
      CHECK(std::abs(st.factor[p] - L(Eigen::Index(i), Eigen::Index(c))) < 1e-10);
}

TEST_CASE("every prefix solve equals the dense normal equations") {
  const Eigen::MatrixXcd B = random_matrix(40, 24, 31);
  const Eigen::VectorXcd y = random_matrix(40, 1, 32);
  for (int k : {1, 3, 8, 16, 24}) {
    const CholState st = grow(B, y, k);
    const auto x = chol_solve(st);
    const Eigen::MatrixXcd Bk = B.leftCols(k);
    const Eigen::VectorXcd ref = (Bk.adjoint() * Bk).ldlt().solve(Bk.adjoint() * y);
    double err = 0.0;
    for (int i = 0; i < k; ++i) err += std::norm(x[std::size_t(i)] - ref[i]);
    CHECK(std::sqrt(err) <= 1e-8 * ref.norm());
  }
}

TEST_CASE("rank collapse raises a rank error naming the step") {
  Eigen::MatrixXcd B(4, 2);
  B.col(0) << 1, 0, 0, 0;
  B.col(1) = B.col(0);  // exactly dependent
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(grow(B, y, 2), RankError);
}

TEST_CASE("lsqr warm start with the optimal point does no work") {
  const Eigen::MatrixXcd B = random_matrix(20, 5, 41);
  const Eigen::VectorXcd yv = random_matrix(20, 1, 42);
  const Eigen::VectorXcd xopt = (B.adjoint() * B).ldlt().solve(B.adjoint() * yv);
  auto apply = [&](const cplx* x, cplx* out) {
    Eigen::Map<const Eigen::VectorXcd> xm(x, 5);
    Eigen::Map<Eigen::VectorXcd>(out, 20) = B * xm;
  };
  auto adj = [&](const cplx* r, cplx* out) {
    Eigen::Map<const Eigen::VectorXcd> rm(r, 20);
    Eigen::Map<Eigen::VectorXcd>(out, 5) = B.adjoint() * rm;
  };
  const std::vector<cplx> y(yv.data(), yv.data() + 20);
  const std::vector<cplx> x0(xopt.data(), xopt.data() + 5);
  const LsqrResult res = lsqr_solve(20, 5, apply, adj, y, x0, 1e-8, 100);
  CHECK(res.iterations == 0);
  CHECK(res.converged);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(res.x[std::size_t(i)] - xopt[i]) < 1e-12);
}

TEST_CASE("orthonormal columns converge in one iteration") {
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(8, 3);
  B(0, 0) = B(3, 1) = B(5, 2) = 1.0;
  const Eigen::VectorXcd yv = random_matrix(8, 1, 51);
  auto apply = [&](const cplx* x, cplx* out) {
    Eigen::Map<Eigen::VectorXcd>(out, 8) = B * Eigen::Map<const Eigen::VectorXcd>(x, 3);
  };
  auto adj = [&](const cplx* r, cplx* out) {
    Eigen::Map<Eigen::VectorXcd>(out, 3) = B.adjoint() * Eigen::Map<const Eigen::VectorXcd>(r, 8);
  };
  const std::vector<cplx> y(yv.data(), yv.data() + 8);
  const std::vector<cplx> x0(3, cplx(0, 0));
  const LsqrResult res = lsqr_solve(8, 3, apply, adj, y, x0, 1e-10, 100);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  const Eigen::VectorXcd want = B.adjoint() * yv;
  for (int i = 0; i < 3; ++i) CHECK(std::abs(res.x[std::size_t(i)] - want[i]) < 1e-9);
}

TEST_CASE("lsqr agrees with a dense solve") {
  const Eigen::MatrixXcd B = random_matrix(64, 10, 61);
  const Eigen::VectorXcd yv = random_matrix(64, 1, 62);
  auto apply = [&](const cplx* x, cplx* out) {
    Eigen::Map<Eigen::VectorXcd>(out, 64) = B * Eigen::Map<const Eigen::VectorXcd>(x, 10);
  };
  auto adj = [&](const cplx* r, cplx* out) {
    Eigen::Map<Eigen::VectorXcd>(out, 10) = B.adjoint() * Eigen::Map<const Eigen::VectorXcd>(r, 64);
  };
  const std::vector<cplx> y(yv.data(), yv.data() + 64);
  const std::vector<cplx> x0(10, cplx(0, 0));
  const LsqrResult res = lsqr_solve(64, 10, apply, adj, y, x0, 1e-10, 400);
  const Eigen::VectorXcd ref = (B.adjoint() * B).ldlt().solve(B.adjoint() * yv);
  double err = 0.0;
  for (int i = 0; i < 10; ++i) err += std::norm(res.x[std::size_t(i)] - ref[i]);
  CHECK(std::sqrt(err) <= 1e-7 * ref.norm());
  CHECK(res.residual_norm == doctest::Approx((B * ref - yv).norm()).epsilon(1e-6));
}

}  // TEST_SUITE
