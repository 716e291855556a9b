#include <doctest.h>

#include <cmath>

#include "softcover/sdp.hpp"
#include "softcover/search.hpp"
#include "softcover/zoo.hpp"
#include "test_util.hpp"

using namespace softcover;
using softcover::testing::max_abs;

namespace {

Matrix eye(int d) { return Matrix::Identity(d, d); }

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

bool is_state(const Matrix& s) {
  return std::abs(s.trace().real() - 1.0) < 1e-9 && qmat::min_eigenvalue(s) >= -1e-9;
}

}  // namespace

TEST_CASE("coordinate descent on a quadratic") {
  const auto basis = sdp::hermitian_basis(2, true);
  const Matrix target = diag2(0.8, 0.2);
  auto f = [&](const Matrix& s) { return (s - target).squaredNorm(); };
  auto feasible = [](const Matrix& s) { return qmat::min_eigenvalue(s) >= 0.0; };
  search::Options opt;
  opt.starts = 4;
  Rng rng(1);
  const auto res = search::coordinate_descent(eye(2) / 2.0, basis, feasible, f, opt, rng);
  CHECK(res.value < 1e-10);
  CHECK(!res.exact);
  CHECK(res.starts == 4);
  CHECK(max_abs(res.argmin - target) < 1e-5);

  Rng rng2(1);
  const auto fixed = search::coordinate_descent(target, {}, feasible, f, opt, rng2);
  CHECK(fixed.exact);
  CHECK(fixed.value == 0.0);
}

TEST_CASE("coordinate descent is deterministic under a seed") {
  const auto basis = sdp::hermitian_basis(3, true);
  auto f = [](const Matrix& s) { return std::abs(s(0, 1)) + s(2, 2).real(); };
  auto feasible = [](const Matrix& s) { return qmat::min_eigenvalue(s) >= 0.0; };
  search::Options opt;
  opt.starts = 3;
  Rng a(42), b(42);
  const auto ra = search::coordinate_descent(eye(3) / 3.0, basis, feasible, f, opt, a);
  const auto rb = search::coordinate_descent(eye(3) / 3.0, basis, feasible, f, opt, b);
  CHECK(ra.value == rb.value);
  CHECK(ra.evaluations == rb.evaluations);
  CHECK(max_abs(ra.argmin - rb.argmin) == 0.0);
}

TEST_CASE("feasible sections") {
  Rng rng(2);
  const Matrix rho = qmat::random_density(3, rng);
  const auto id = search::feasible_section(rho, zoo::identity(3));
  CHECK(id.directions.empty());
  CHECK(max_abs(id.center - rho) < 1e-7);

  // dephasing fixes the diagonal only
  const auto dp = search::feasible_section(diag2(0.7, 0.3), zoo::dephasing(0.5));
  CHECK(dp.directions.size() == 2);
  CHECK(is_state(dp.center));
  CHECK(max_abs(zoo::dephasing(0.5).apply(dp.center) - diag2(0.7, 0.3)) < 1e-7);
  CHECK(dp.margin > 0.29);

  // amplitude damping with gamma = 1 only reaches |0><0|
  try {
    search::feasible_section(eye(2) / 2.0, zoo::amplitude_damping(1.0));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "state");
  }
}

TEST_CASE("closest input") {
  const auto [s1, d1] = search::closest_input(eye(2) / 2.0, zoo::identity(2));
  CHECK(d1 < 1e-7);
  CHECK(max_abs(s1 - eye(2) / 2.0) < 1e-6);
  const auto [s2, d2] = search::closest_input(eye(2) / 2.0, zoo::amplitude_damping(1.0));
  CHECK(d2 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(is_state(s2));
}

TEST_CASE("minimization over the eps-ball") {
  // min <0|sigma|0> with 1/2 ||sigma - I/2||_1 <= 0.2 is 0.3
  auto f = [](const Matrix& s) { return s(0, 0).real(); };
  search::Options opt;
  opt.starts = 8;
  Rng rng(3);
  const auto res = search::minimize_over_ball(eye(2) / 2.0, zoo::identity(2), 0.2, f, opt, rng);
  CHECK(res.value == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(!res.exact);
  CHECK(qmat::trace_distance(res.argmin, eye(2) / 2.0) <= 0.2 + 1e-9);
  CHECK(is_state(res.argmin));

  Rng rng2(3);
  try {
    search::minimize_over_ball(eye(2) / 2.0, zoo::amplitude_damping(1.0), 0.2, f, opt, rng2);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "epsilon");
  }
}

TEST_CASE("minimization over a section stays feasible") {
  const auto ch = zoo::dephasing(0.5);
  const Matrix target = diag2(0.6, 0.4);
  const auto section = search::feasible_section(target, ch);
  // largest off-diagonal modulus is sqrt(0.24)
  auto f = [](const Matrix& s) { return -std::abs(s(0, 1)); };
  search::Options opt;
  opt.starts = 6;
  Rng rng(4);
  const auto res = search::minimize_over_section(section, f, opt, rng);
  CHECK(res.value == doctest::Approx(-std::sqrt(0.24)).epsilon(1e-4));
  CHECK(max_abs(ch.apply(res.argmin) - target) < 1e-7);
  CHECK(is_state(res.argmin));
}
