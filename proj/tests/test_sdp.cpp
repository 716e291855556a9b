#include <doctest.h>

#include <cmath>

#include "softcover/sdp.hpp"
#include "test_util.hpp"

using namespace softcover;
using softcover::testing::mat;
using softcover::testing::max_abs;

namespace {

// cvxpy/Clarabel reference, tests/oracles/generate.py
const Matrix kR1 = mat(4, {{0.260416160394, 0}, {-0.025883974132, -0.147410140987}, {0.00918876114001, 0.0584664568541}, {0.122227222352, -0.0729143395781},
    {-0.025883974132, 0.147410140987}, {0.112379005141, 0}, {0.013085919266, 0.003114674434}, {0.0682485382051, 0.0950495533461},
    {0.00918876114001, -0.0584664568541}, {0.013085919266, -0.003114674434}, {0.278970509145, 0}, {0.024095329792, 0.116818565085},
    {0.122227222352, 0.0729143395781}, {0.0682485382051, -0.0950495533461}, {0.024095329792, -0.116818565085}, {0.348234325319, 0}});
constexpr double kHminR1 = -0.0836348570483893;

Matrix eye(int d) { return Matrix::Identity(d, d); }

}  // namespace

TEST_CASE("hermitian basis is orthonormal") {
  for (int d : {1, 2, 3}) {
    for (bool traceless : {false, true}) {
      const auto b = sdp::hermitian_basis(d, traceless);
      CHECK(b.size() == static_cast<std::size_t>(d * d - (traceless ? 1 : 0)));
      for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(max_abs(b[i] - b[i].adjoint()) == 0.0);
        if (traceless) CHECK(std::abs(b[i].trace()) < 1e-15);
        for (std::size_t j = 0; j < b.size(); ++j) {
          const double ip = (b[i].adjoint() * b[j]).trace().real();
          CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("min Tr sigma with 1 (x) sigma >= 1 is d") {
  for (int d : {2, 3}) {
    sdp::Model m;
    const int s = m.add_hermitian(d);
    const int b = m.add_block(d * d);
    m.add_term(b, s, [d](const Matrix& x) { return qmat::kron(eye(d), x); });
    m.add_constant(b, -eye(d * d));
    m.add_objective(s, eye(d));
    const auto sol = m.minimize();
    REQUIRE(sol.ok());
    CHECK(sol.value == doctest::Approx(d).epsilon(1e-8));
    CHECK(sol.dual_value == doctest::Approx(d).epsilon(1e-8));
    CHECK(max_abs(sol.var(s) - eye(d)) < 1e-6);
  }
}

TEST_CASE("min t with t 1 >= rho is the largest eigenvalue") {
  Rng rng(3);
  const Matrix rho = qmat::random_density(4, rng);
  sdp::Model m;
  const int t = m.add_scalar();
  const int b = m.add_block(4);
  m.add_term(b, t, [](const Matrix& x) { return Matrix(x(0, 0) * eye(4)); });
  m.add_constant(b, -rho);
  m.add_objective(t, Matrix::Ones(1, 1));
  const auto sol = m.minimize();
  REQUIRE(sol.ok());
  CHECK(sol.value == doctest::Approx(qmat::max_eigenvalue(rho)).epsilon(1e-8));
  CHECK(sol.gap() <= 1e-8);
}

TEST_CASE("random min-entropy program matches the reference value") {
  sdp::Model m;
  const int s = m.add_hermitian(2);
  const int b = m.add_block(4);
  m.add_term(b, s, [](const Matrix& x) { return qmat::kron(eye(2), x); });
  m.add_constant(b, -kR1);
  m.add_objective(s, eye(2));
  sdp::Options opt;
  opt.gap_tol = 1e-10;
  const auto sol = m.minimize(opt);
  REQUIRE(sol.ok());
  CHECK(std::abs(-std::log2(sol.value) - kHminR1) < 1e-6);
  CHECK(std::abs(-std::log2(sol.dual_value) - kHminR1) < 1e-6);
  // the dual is a state on AB with Tr_A W = 1
  const Matrix w = sol.duals[static_cast<std::size_t>(b)];
  CHECK(qmat::min_eigenvalue(0.5 * (w + w.adjoint())) > -1e-8);
  CHECK(max_abs(qmat::partial_trace(w, {2, 2}, {1}) - eye(2)) < 1e-6);
}

TEST_CASE("fixed trace and real blocks") {
  // min <0|X|0> over states: 0 at X = |1><1|
  sdp::Model m;
  const int x = m.add_hermitian(2, 1.0);
  const int b = m.add_block(2);
  m.add_term(b, x, [](const Matrix& v) { return v; });
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  m.add_objective(x, g);
  const auto sol = m.minimize();
  REQUIRE(sol.ok());
  CHECK(std::abs(sol.value) < 1e-8);
  CHECK(sol.var(x).trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  // scalar bounds as a real 1x1 block: min t s.t. t >= 0.3
  sdp::Model r;
  const int t = r.add_scalar();
  const int rb = r.add_block(1, true);
  r.add_term(rb, t, [](const Matrix& v) { return v; });
  r.add_constant(rb, -0.3 * Matrix::Ones(1, 1));
  r.add_objective(t, Matrix::Ones(1, 1));
  const auto rs = r.minimize();
  REQUIRE(rs.ok());
  CHECK(rs.value == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("root fidelity block with a complex variable") {
  // max Re Tr Y s.t. [[rho, Y], [Y^dagger, sigma]] >= 0 gives sqrt F(rho, sigma)
  Rng rng(4);
  const Matrix rho = qmat::random_density(3, rng);
  const Matrix sigma = qmat::random_density(3, rng);
  sdp::Model m;
  const int y = m.add_complex(3, 3);
  const int b = m.add_block(6);
  m.add_term(b, y, [](const Matrix& v) {
    Matrix out = Matrix::Zero(6, 6);
    out.topRightCorner(3, 3) = v;
    out.bottomLeftCorner(3, 3) = v.adjoint();
    return out;
  });
  Matrix c = Matrix::Zero(6, 6);
  c.topLeftCorner(3, 3) = rho;
  c.bottomRightCorner(3, 3) = sigma;
  m.add_constant(b, c);
  m.add_objective(y, -eye(3));
  const auto sol = m.minimize();
  REQUIRE(sol.ok());
  CHECK(-sol.value == doctest::Approx(std::sqrt(qmat::fidelity(rho, sigma))).epsilon(1e-7));
}

TEST_CASE("infeasible programs are reported") {
  sdp::Model m;
  const int t = m.add_scalar();
  const int b = m.add_block(2, true);
  m.add_term(b, t, [](const Matrix& v) {
    Matrix out = Matrix::Zero(2, 2);
    out(0, 0) = v(0, 0);
    out(1, 1) = -v(0, 0);
    return out;
  });
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = -1.0;
  c(1, 1) = -1.0;
  m.add_constant(b, c);
  m.add_objective(t, Matrix::Ones(1, 1));
  const auto sol = m.minimize();
  CHECK_FALSE(sol.ok());
}
