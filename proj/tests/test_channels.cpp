#include <doctest.h>

#include <cmath>

#include "softcover/channels.hpp"
#include "softcover/zoo.hpp"
#include "test_util.hpp"

using namespace softcover;
using softcover::testing::act_first;
using softcover::testing::act_last;
using softcover::testing::max_abs;

namespace {

std::vector<channels::Channel> zoo_sample() {
  return {zoo::identity(3),        zoo::depolarizing(2, 0.5), zoo::depolarizing(3, 1.0),
          zoo::dephasing(0.2),     zoo::amplitude_damping(0.3), zoo::erasure(2, 0.25),
          zoo::measure(3, "z"),    zoo::measure(2, "x")};
}

channels::Channel channel_of(const channels::StinespringIsometry& v) {
  return channels::channel_of_isometry(v, Vector::Unit(v.out_dim(), 0));
}

}  // namespace

TEST_CASE("zoo channels are CPTP") {
  for (const auto& n : zoo_sample()) {
    CAPTURE(n.name());
    CHECK(channels::is_cptp(n));
    CHECK_NOTHROW(channels::verify_cptp(n));
    CHECK(n.choi().trace().real() == doctest::Approx(n.in_dim()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(zoo::depolarizing(2, 1.5), ValidationError);
  CHECK_THROWS_AS(zoo::dephasing(-0.1), ValidationError);
}

TEST_CASE("zoo closed forms") {
  const Matrix rho = testing::mat(2, {{0.7, 0}, {0.2, 0.1}, {0.2, -0.1}, {0.3, 0}});
  CHECK(max_abs(zoo::depolarizing(2, 1.0).apply(rho) - Matrix::Identity(2, 2) / 2.0) < 1e-14);
  const Matrix dp = zoo::dephasing(0.2).apply(rho);
  CHECK(std::abs(dp(0, 1) - 0.6 * rho(0, 1)) < 1e-14);
  CHECK(std::abs(dp(0, 0) - rho(0, 0)) < 1e-14);
  const Matrix ad = zoo::amplitude_damping(1.0).apply(rho);
  CHECK(std::abs(ad(0, 0) - 1.0) < 1e-14);
  const Matrix er = zoo::erasure(2, 0.25).apply(rho);
  CHECK(er.rows() == 3);
  CHECK(std::abs(er(2, 2) - 0.25) < 1e-14);
  CHECK(zoo::from_spec("depolarizing:2:0.5").name() == "depolarizing");
  CHECK(zoo::from_spec("dephasing:0.3").in_dim() == 2);
  CHECK(zoo::from_spec("identity:4").in_dim() == 4);
  CHECK_THROWS_AS(zoo::from_spec("nonsense:1"), ValidationError);
  CHECK(!zoo::list().empty());
}

TEST_CASE("adjoint pairing and unitality") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int din = 2 + trial % 3;
    const int dout = 2 + (trial / 3) % 3;
    const auto n = channels::random_channel(din, dout, 1 + trial % 4, rng);
    const Matrix rho = qmat::random_density(din, rng);
    const Matrix x = qmat::random_hermitian(dout, rng);
    const cplx lhs = (n.apply(rho) * x).trace();
    const cplx rhs = (rho * n.apply_adjoint(x)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-9);
    CHECK(max_abs(n.apply_adjoint(Matrix::Identity(dout, dout)) - Matrix::Identity(din, din)) <
          1e-9);
    CHECK(n.apply(rho).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qmat::min_eigenvalue(n.apply(rho)) > -1e-12);
  }
}

TEST_CASE("kraus, choi and stinespring forms agree") {
  Rng rng(9);
  const auto n = channels::random_channel(3, 2, 4, rng);
  const auto back = channels::Channel::from_choi(n.choi(), n.in_sig(), n.out_sig());
  const auto& v = n.stinespring();
  CHECK(v.isometry_defect() < 1e-8);
  CHECK(v.env_dim() >= std::max<int>(n.kraus().size(), n.out_dim()));
  for (int k = 0; k < 50; ++k) {
    const Matrix rho = qmat::random_density(3, rng);
    CHECK(max_abs(back.apply(rho) - n.apply(rho)) < 1e-8);
    CHECK(max_abs(v.apply(rho) - n.apply(rho)) < 1e-8);
  }
  Matrix bad = n.choi();
  bad(0, 0) -= 1.0;
  CHECK_THROWS_AS(channels::Channel::from_choi(bad, n.in_sig(), n.out_sig()), ValidationError);
}

TEST_CASE("tensor powers and composition") {
  const auto d = zoo::dephasing(0.2);
  const auto d2 = channels::tensor_power(d, 2);
  CHECK(d2.in_dim() == 4);
  CHECK(d2.in_sig().size() == 2);
  CHECK(channels::tensor_power(d, 3).out_dim() == 8);
  Rng rng(10);
  const Matrix a = qmat::random_density(2, rng);
  const Matrix b = qmat::random_density(2, rng);
  CHECK(max_abs(d2.apply(qmat::kron(a, b)) - qmat::kron(d.apply(a), d.apply(b))) < 1e-13);

  const auto c = channels::compose(zoo::dephasing(0.1), zoo::amplitude_damping(0.4));
  CHECK(max_abs(c.apply(a) - zoo::dephasing(0.1).apply(zoo::amplitude_damping(0.4).apply(a))) <
        1e-13);
  CHECK_THROWS_AS(channels::compose(zoo::identity(3), d), DimensionError);

  const Matrix ab = qmat::kron(a, b);
  CHECK(max_abs(d.apply_on(ab, {2, 2}, 1) - qmat::kron(a, d.apply(b))) < 1e-13);
  const auto e = zoo::erasure(2, 0.3);
  CHECK(max_abs(e.apply_on(ab, {2, 2}, 0) - qmat::kron(e.apply(a), b)) < 1e-13);
}

TEST_CASE("channel json round trip") {
  const auto n = zoo::amplitude_damping(0.35);
  const auto back = channels::Channel::from_json(n.to_json());
  CHECK(back.name() == n.name());
  CHECK(max_abs(back.choi() - n.choi()) < 1e-15);
}

TEST_CASE("ensembles") {
  channels::Ensemble e{{0.5, 0.5},
                       {qmat::DensityOperator::basis_state(2, 0).mat(),
                        qmat::DensityOperator::basis_state(2, 1).mat()}};
  CHECK_NOTHROW(e.validate());
  CHECK(max_abs(e.average() - Matrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(e.cq_state().rows() == 4);
  channels::Ensemble bad{{0.7, 0.5}, e.states};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

// (W (x) 1_A)|psi_rhoA> on [B_R, E, A] against (1_BR (x) V)|psi_rhoB> on [B_R, A, E].
TEST_CASE("posterior reference map intertwines") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int db = 2 + trial % 3;
    const int da = 2 + (trial / 3) % 3;
    const int de = std::max(1 + (trial / 9) % 3, (db + da - 1) / da);
    const auto v = channels::random_isometry(db, da, de, rng);
    const Matrix rho_b = qmat::random_density(db, rng, trial % 5 == 0 ? 1 : 0);
    const auto w = channels::posterior_reference_map(rho_b, v);
    CHECK(w.in_dim() == da);
    CHECK(w.out_dim() == db);
    CHECK(w.isometry_defect() < 1e-8);

    const Matrix rho_a = v.apply(rho_b);
    const Vector lhs = act_first(w.V, qmat::canonical_purification_vector(rho_a));
    const Vector rhs = act_last(v.V, qmat::canonical_purification_vector(rho_b));
    const Vector rhs_perm = qmat::permute_systems(rhs, {db, da, de}, {0, 2, 1});
    CHECK((lhs - rhs_perm).norm() < 1e-8);
  }
}

TEST_CASE("posterior reference map equals the transposed Petz map") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int db = 2 + trial % 3;
    const int da = 2 + (trial / 3) % 3;
    const auto n = channels::random_channel(db, da, std::max(1 + trial % 4, (db + da - 1) / da), rng);
    const Matrix rho_b = qmat::random_density(db, rng);
    const auto w = channels::posterior_reference_map(rho_b, n.stinespring());
    const auto nw = channel_of(w);
    // inputs on the support of (N(rho_B))^T
    const Matrix basis = qmat::support_basis(n.apply(rho_b).transpose());
    const Matrix c = qmat::random_density(static_cast<int>(basis.cols()), rng);
    const Matrix sigma_ar = basis * c * basis.adjoint();
    const Matrix via_w = nw.apply(sigma_ar);
    const Matrix via_petz = channels::petz_recovery_apply(rho_b, n, sigma_ar);
    CHECK(max_abs(via_w - via_petz) < 1e-8);
  }
}

TEST_CASE("Petz map rejects inputs off the support") {
  const auto n = zoo::identity(2);
  const Matrix rho_b = qmat::DensityOperator::basis_state(2, 0).mat();
  const Matrix off = qmat::DensityOperator::basis_state(2, 1).mat();
  CHECK_THROWS_AS(channels::petz_recovery_apply(rho_b, n, off), SupportError);
  CHECK_NOTHROW(channels::petz_recovery_apply(rho_b, n, rho_b));
}

TEST_CASE("isometry completion is trace preserving") {
  Rng rng(14);
  const Matrix rho_b = qmat::random_density(3, rng, 1);
  const auto v = channels::random_isometry(3, 3, 2, rng);
  const auto w = channels::posterior_reference_map(rho_b, v);
  const auto nw = channel_of(w);
  CHECK(channels::is_cptp(nw));
}
