#include <doctest.h>

#include <cmath>

#include "softcover/qmat.hpp"
#include "test_util.hpp"

using namespace softcover;
using softcover::testing::max_abs;

namespace {

// Index-loop reference implementations.
Matrix kron_loop(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Tr_B of a (d0 x d1 x d2) operator keeping systems 0 and 2.
Matrix trace_middle(const Matrix& m, int d0, int d1, int d2) {
  Matrix out = Matrix::Zero(d0 * d2, d0 * d2);
  for (int a = 0; a < d0; ++a)
    for (int c = 0; c < d2; ++c)
      for (int a2 = 0; a2 < d0; ++a2)
        for (int c2 = 0; c2 < d2; ++c2)
          for (int b = 0; b < d1; ++b)
            out(a * d2 + c, a2 * d2 + c2) += m((a * d1 + b) * d2 + c, (a2 * d1 + b) * d2 + c2);
  return out;
}

}  // namespace

TEST_CASE("signature bookkeeping") {
  qmat::SystemSignature s({2, 3}, {"A", "B"});
  CHECK(s.total() == 6);
  CHECK(s.index_of("B") == 1);
  CHECK_THROWS_AS(s.index_of("C"), ValidationError);
  CHECK_THROWS_AS(s.concat(qmat::SystemSignature::single(2, "A")), DimensionError);
  const auto t = s.concat(qmat::SystemSignature::single(4, "C"));
  CHECK(t.total() == 24);
  CHECK(t.suffixed("_R").labels()[2] == "C_R");
  CHECK(qmat::SystemSignature().total() == 1);
}

TEST_CASE("density operator validation") {
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(qmat::DensityOperator{m});
  CHECK_THROWS_AS(qmat::DensityOperator{2.0 * m}, ValidationError);
  Matrix bad = m;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(qmat::DensityOperator{bad}, ValidationError);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(qmat::DensityOperator{neg}, ValidationError);
  CHECK_NOTHROW(qmat::DensityOperator{0.5 * m, qmat::kDefaultTol, true});
  const qmat::SystemSignature three({3}, {"A"});
  CHECK_THROWS_AS(qmat::DensityOperator(m, three), DimensionError);
}

TEST_CASE("kron, partial trace and permutation against index loops") {
  Rng rng(11);
  const Matrix a = qmat::random_hermitian(2, rng);
  const Matrix b = qmat::random_hermitian(3, rng);
  CHECK(max_abs(qmat::kron(a, b) - kron_loop(a, b)) < 1e-14);

  const Matrix m = qmat::random_density(12, rng);
  CHECK(max_abs(qmat::partial_trace(m, {2, 3, 2}, {0, 2}) - trace_middle(m, 2, 3, 2)) < 1e-13);
  CHECK(max_abs(qmat::partial_trace(m, {2, 3, 2}, {2, 0}) - trace_middle(m, 2, 3, 2)) < 1e-13);

  const Matrix x = qmat::random_hermitian(2, rng);
  const Matrix y = qmat::random_hermitian(3, rng);
  const Matrix z = qmat::random_hermitian(2, rng);
  const Matrix xyz = qmat::kron(qmat::kron(x, y), z);
  const Matrix zxy = qmat::kron(qmat::kron(z, x), y);
  CHECK(max_abs(qmat::permute_systems(xyz, {2, 3, 2}, {2, 0, 1}) - zxy) < 1e-13);

  const Vector u = qmat::random_pure(2, rng);
  const Vector v = qmat::random_pure(3, rng);
  CHECK(max_abs(qmat::permute_systems(qmat::kron(u, v), {2, 3}, {1, 0}) - qmat::kron(v, u)) <
        1e-14);
  CHECK(max_abs(qmat::kron_power(a, 3) - qmat::kron(qmat::kron(a, a), a)) < 1e-13);
}

TEST_CASE("signature-aware partial trace") {
  auto ra = qmat::DensityOperator::basis_state(2, 0, "A");
  auto rb = qmat::DensityOperator::maximally_mixed(3, "B");
  const auto ab = qmat::tensor(ra, rb);
  CHECK(ab.sig().total() == 6);
  const auto b = qmat::partial_trace(ab, {"B"});
  CHECK(max_abs(b.mat() - rb.mat()) < 1e-15);
  const auto ba = qmat::permute(ab, {"B", "A"});
  CHECK(ba.sig().labels()[0] == "B");
  CHECK(max_abs(ba.mat() - qmat::kron(rb.mat(), ra.mat())) < 1e-15);
}

TEST_CASE("eigh reconstructs and rejects non-Hermitian input") {
  Rng rng(5);
  for (int d : {1, 2, 5, 8}) {
    const Matrix h = qmat::random_hermitian(d, rng);
    const auto e = qmat::eigh(h);
    const Matrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(max_abs(back - h) <= 1e-8 * max_abs(h));
    for (int k = 1; k < d; ++k) CHECK(e.values(k - 1) >= e.values(k));
  }
  Matrix n = Matrix::Zero(2, 2);
  n(0, 1) = 1.0;
  CHECK_THROWS_AS(qmat::eigh(n), ValidationError);
}

TEST_CASE("spectral functions") {
  Rng rng(6);
  const Matrix rho = qmat::random_density(4, rng, 2);
  const Matrix s = qmat::sqrt_psd(rho);
  CHECK(max_abs(s * s - rho) < 1e-12);
  CHECK(qmat::numerical_rank(rho) == 2);
  const Matrix p = qmat::support_projector(rho);
  CHECK(max_abs(p * p - p) < 1e-12);
  CHECK(max_abs(p * rho - rho) < 1e-12);
  const Matrix inv = qmat::pinv_psd(rho);
  CHECK(max_abs(rho * inv * rho - rho) < 1e-10);
  const Matrix is = qmat::inv_sqrt_psd(rho);
  CHECK(max_abs(is * rho * is - p) < 1e-10);
  CHECK(qmat::support_basis(rho).cols() == 2);
}

TEST_CASE("canonical purification has the transpose as reference marginal") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho = qmat::random_density(2, rng);
    const Vector psi = qmat::canonical_purification_vector(rho);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    const Matrix full = psi * psi.adjoint();
    CHECK(max_abs(qmat::partial_trace(full, {2, 2}, {0}) - rho.transpose()) < 1e-10);
    CHECK(max_abs(qmat::partial_trace(full, {2, 2}, {1}) - rho) < 1e-10);
  }
  const auto pure = qmat::canonical_purification(qmat::DensityOperator::maximally_mixed(3, "B"));
  CHECK(pure.sig().labels()[0] == "B_R");
  CHECK(pure.sig().labels()[1] == "B");
}

TEST_CASE("Haar unitaries") {
  Rng rng(2024);
  for (int d : {1, 2, 3, 6}) {
    const Matrix u = qmat::haar_unitary(d, rng);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(d, d)) < 1e-10);
  }
  // |U_11|^2 is uniform on [0, 1] for d = 2
  const int samples = 10000;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += std::norm(qmat::haar_unitary(2, rng)(0, 0));
  const double sigma = std::sqrt(1.0 / 12.0 / samples);
  CHECK(std::abs(sum / samples - 0.5) < 3.0 * sigma);
}

TEST_CASE("Haar unitaries are reproducible from the seed") {
  Rng a(99);
  Rng b(99);
  CHECK(max_abs(qmat::haar_unitary(4, a) - qmat::haar_unitary(4, b)) == 0.0);
  const Rng root(3);
  Rng s1 = root.substream(4);
  Rng s2 = root.substream(4);
  CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("distance measures on closed-form pairs") {
  const Matrix zero = qmat::DensityOperator::basis_state(2, 0).mat();
  const Matrix one = qmat::DensityOperator::basis_state(2, 1).mat();
  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  CHECK(qmat::trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qmat::trace_distance(zero, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qmat::fidelity(zero, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qmat::fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qmat::purified_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
  // subnormalized: F* picks up sqrt((1 - Tr a)(1 - Tr b))
  CHECK(qmat::fidelity_star(0.5 * zero, 0.5 * one) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(qmat::trace_norm(zero - one) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Fuchs-van de Graaf inequalities") {
  Rng rng(31);
  for (int d : {2, 3, 4}) {
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
      const Matrix r = qmat::random_density(d, rng, 1 + k % d);
      const Matrix s = qmat::random_density(d, rng, 1 + (k / d) % d);
      const double f = qmat::fidelity(r, s);
      const double t = qmat::trace_distance(r, s);
      if (!(1.0 - std::sqrt(f) <= t + 1e-9 && t <= std::sqrt(std::max(0.0, 1.0 - f)) + 1e-9))
        ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("random states are valid") {
  Rng rng(1);
  for (int d : {2, 3, 5}) {
    for (int r : {0, 1, 2}) {
      const Matrix rho = qmat::random_density(d, rng, r);
      CHECK_NOTHROW(qmat::DensityOperator{rho});
      if (r > 0) CHECK(qmat::numerical_rank(rho) == r);
    }
    CHECK(std::abs(qmat::random_pure(d, rng).norm() - 1.0) < 1e-12);
  }
}
