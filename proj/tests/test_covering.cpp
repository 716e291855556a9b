#include <doctest.h>

#include <cmath>
#include <string>

#include "softcover/covering.hpp"
#include "softcover/normal.hpp"
#include "softcover/zoo.hpp"
#include "test_util.hpp"

using namespace softcover;
using softcover::testing::max_abs;

namespace {

constexpr double kDephSecond64 = 0.55877528194701798;  // eps 0.5, tests/oracles/generate.py

Matrix eye(int d) { return Matrix::Identity(d, d); }

}  // namespace

TEST_CASE("dimension cap") {
  CHECK_NOTHROW(covering::check_dimension(16, "x"));
  try {
    covering::check_dimension(32, "probe");
    FAIL("expected a resource error");
  } catch (const ResourceLimitError& e) {
    CHECK(e.total_dim() == 1024);
    CHECK(std::string(e.what()).find("1024") != std::string::npos);
  }
}

TEST_CASE("branch decomposition sums back to sigma") {
  Rng rng(1);
  for (int d : {2, 3, 4}) {
    for (int r = 1; r <= d; ++r) {
      const Matrix sigma = qmat::random_density(d, rng);
      const auto n = channels::random_channel(d, 2, 2, rng);
      const int padded = ((d + r - 1) / r) * r;
      const auto dec = covering::decompose(sigma, n, r, qmat::haar_unitary(padded, rng));
      Matrix sum = Matrix::Zero(d, d);
      double total = 0.0;
      for (std::size_t x = 0; x < dec.probs.size(); ++x) {
        CHECK(dec.probs[x] >= -1e-15);
        total += dec.probs[x];
        sum += dec.probs[x] * dec.states[x];
        if (dec.probs[x] > 1e-14) CHECK(std::abs(dec.states[x].trace().real() - 1.0) < 1e-12);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(max_abs(sum - sigma) < 1e-9);
      CHECK(dec.best >= 0);
      CHECK(dec.average_eps >= dec.best_eps - 1e-15);
    }
  }
  CHECK_THROWS_AS(covering::decompose(eye(2) / 2.0, zoo::identity(2), 3, eye(3)), ValidationError);
  CHECK_THROWS_AS(covering::decompose(eye(2) / 2.0, zoo::identity(2), 1, eye(3)), DimensionError);
}

TEST_CASE("code synthesis") {
  const Rng rng(7);
  const Matrix sigma = eye(2) / 2.0;
  const auto ch = zoo::dephasing(0.2);
  const auto a = covering::synthesize(sigma, ch, 1, rng, 16);
  const auto b = covering::synthesize(sigma, ch, 1, rng, 16);
  CHECK(a.achieved_eps == b.achieved_eps);
  CHECK(a.trial_index == b.trial_index);
  CHECK(a.trial_eps.size() == 16);
  CHECK(a.seed == 7);
  CHECK(a.rank <= a.r);
  CHECK(std::abs(covering::covering_error(a.sigma_hat, ch, ch.apply(sigma)) - a.achieved_eps) <
        1e-12);
  for (double e : a.trial_eps) CHECK(a.achieved_eps <= e);

  // full rank leaves sigma untouched; a constant channel covers with rank one
  CHECK(covering::synthesize(sigma, zoo::identity(2), 2, rng, 4).achieved_eps < 1e-12);
  CHECK(covering::synthesize(sigma, zoo::depolarizing(2, 1.0), 1, rng, 4).achieved_eps < 1e-12);
  CHECK_THROWS_AS(covering::synthesize(sigma, ch, 3, rng, 4), ValidationError);
  CHECK_THROWS_AS(covering::synthesize(sigma, ch, 1, rng, 0), ValidationError);
}

TEST_CASE("achievability bound") {
  const Matrix sigma = eye(2) / 2.0;
  const auto b = covering::achievability_bound(sigma, zoo::identity(2), 0.05, 0.05);
  CHECK(b.eps_bound == doctest::Approx(0.8));
  CHECK(b.eps_bound_average == doctest::Approx(0.4));
  CHECK(b.method == "sdp");
  CHECK(b.log_theta == doctest::Approx(qmat::clamp_nonneg(-b.h_min_smooth - 2 * std::log2(0.05))));
  // for the identity the smoothed min-entropy sits just above -1
  CHECK(b.h_min_smooth >= -1.0 - 1e-7);
  CHECK(b.h_min_smooth <= 0.0);
  CHECK_THROWS_AS(covering::achievability_bound(sigma, zoo::identity(2), 1.5, 0.05),
                  ValidationError);
}

TEST_CASE("converse objective and asymptotic rate") {
  const Matrix half = eye(2) / 2.0;
  CHECK(covering::converse_objective(half, zoo::identity(2)) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(covering::converse_objective(half, zoo::depolarizing(2, 1.0)) < 1e-7);
  search::Options opt;
  opt.starts = 4;
  Rng rng(3);
  const auto r = covering::asymptotic_rate(half, zoo::identity(2), opt, rng);
  CHECK(!r.heuristic);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  // partial dephasing pins sigma = I/2; full dephasing leaves the coherences free
  const auto pinned = covering::asymptotic_rate(half, zoo::dephasing(0.2), opt, rng);
  CHECK(!pinned.heuristic);
  CHECK(pinned.value == doctest::Approx(1.0 - entropies::binary_entropy(0.2)).epsilon(1e-9));
  const auto free = covering::asymptotic_rate(half, zoo::dephasing(0.5), opt, rng);
  CHECK(free.heuristic);
  CHECK(std::abs(free.value) < 1e-9);
}

TEST_CASE("second-order rate two ways") {
  const Matrix half = eye(2) / 2.0;
  const auto ch = zoo::dephasing(0.2);
  const double direct = covering::second_order_rate(half, ch, 0.5, 64);
  CHECK(std::abs(direct - kDephSecond64) < 1e-9);

  // spectral evaluation of V: omega_B = I/2, so log(1 (x) omega_B) = -1
  const Matrix omega = entropies::channel_output_with_reference(half, ch);
  const auto ed = qmat::eigh(omega);
  double m1 = 0.0, m2 = 0.0;
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    const double l = ed.values(k);
    if (l <= 1e-15) continue;
    const double x = std::log2(l) + 1.0;
    m1 += l * x;
    m2 += l * x * x;
  }
  const double v = m2 - m1 * m1;
  const double ic = entropies::coherent_information(half, ch);
  const double spectral = ic - std::sqrt(v / 64.0) * normal_quantile(0.0025);
  CHECK(std::abs(direct - spectral) < 1e-9);
  CHECK(std::abs(covering::second_order_rate(half, ch, 0.5, 1000000) - ic) < 1e-2);
}

TEST_CASE("rank sweep") {
  const Rng rng(5);
  const auto sweep = covering::rank_error_sweep(eye(2) / 2.0, zoo::dephasing(0.3), 2, {1, 2, 4},
                                                8, 0.05, 0.05, rng);
  CHECK(sweep.rows.size() == 24);
  CHECK(sweep.codes.size() == 3);
  CHECK(sweep.rows.front().n == 2);
  CHECK(sweep.codes[2].achieved_eps < 1e-12);
  CHECK_THROWS_AS(covering::rank_error_sweep(eye(2) / 2.0, zoo::dephasing(0.3), 2, {5}, 2, 0.05,
                                             0.05, rng),
                  ValidationError);
  try {
    covering::rank_error_sweep(eye(2) / 2.0, zoo::dephasing(0.3), 5, {1}, 2, 0.05, 0.05, rng);
    FAIL("expected a resource error");
  } catch (const ResourceLimitError& e) {
    CHECK(std::string(e.what()).find("1024") != std::string::npos);
  }
}

TEST_CASE("minimal rank") {
  const Rng rng(6);
  CHECK(covering::min_rank_achieving(eye(2) / 2.0, zoo::depolarizing(2, 1.0), 0.05, rng, 4) == 1);
  CHECK(covering::min_rank_achieving(eye(2) / 2.0, zoo::identity(2), 0.05, rng, 16) == 2);
}
