#include "softcover/covering.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "softcover/errors.hpp"
#include "softcover/normal.hpp"

namespace softcover::covering {

void check_dimension(int input_dim, const std::string& what) {
  const long long total = static_cast<long long>(input_dim) * input_dim;
  if (total > kMaxTotalDim) {
    throw ResourceLimitError(what + ": total dimension " + std::to_string(total) +
                                 " of A^n (x) A_R^n exceeds the cap " +
                                 std::to_string(kMaxTotalDim),
                             total);
  }
}

BranchDecomposition decompose(const Matrix& sigma, const channels::Channel& n, int r,
                              const Matrix& u) {
  const int d = static_cast<int>(sigma.rows());
  if (d != n.in_dim()) throw DimensionError("decompose: input state does not fit the channel");
  if (r < 1 || r > d) throw ValidationError("branch rank must lie in [1, dim A]", "r");
  const int ell = (d + r - 1) / r;
  if (u.rows() != ell * r) throw DimensionError("decompose: unitary has the wrong size");
  const Matrix root = qmat::sqrt_psd(sigma);
  const Matrix target = n.apply(sigma);

  BranchDecomposition out;
  out.best_eps = std::numeric_limits<double>::infinity();
  for (int x = 0; x < ell; ++x) {
    const Matrix rows = u.block(x * r, 0, r, d);
    const Matrix m = rows.adjoint() * rows;
    Matrix px = root * m.transpose() * root;
    px = 0.5 * (px + px.adjoint());
    const double p = px.trace().real();
    out.probs.push_back(p);
    if (p <= 1e-14) {
      out.states.push_back(Matrix::Zero(d, d));
      out.eps.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    Matrix sx = px / p;
    const double e = qmat::trace_distance(n.apply(sx), target);
    out.states.push_back(std::move(sx));
    out.eps.push_back(e);
    out.average_eps += p * e;
    if (e < out.best_eps) {
      out.best_eps = e;
      out.best = x;
    }
  }
  return out;
}

double covering_error(const Matrix& code, const channels::Channel& n, const Matrix& target) {
  return qmat::trace_distance(n.apply(code), target);
}

CoveringCode synthesize(const Matrix& sigma, const channels::Channel& n, int r,
                        const Rng& rng, int trials) {
  const int d = static_cast<int>(sigma.rows());
  check_dimension(d, "synthesize");
  if (trials < 1) throw ValidationError("trials must be >= 1", "trials");
  if (r < 1 || r > d) throw ValidationError("branch rank must lie in [1, dim A]", "r");
  const int padded = ((d + r - 1) / r) * r;

  CoveringCode code;
  code.r = r;
  code.seed = rng.seed();
  code.achieved_eps = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(t));
    const Matrix u = qmat::haar_unitary(padded, sub);
    auto dec = decompose(sigma, n, r, u);
    code.trial_eps.push_back(dec.best_eps);
    code.trial_branch.push_back(dec.best);
    code.trial_average_eps.push_back(dec.average_eps);
    if (dec.best >= 0 && dec.best_eps < code.achieved_eps) {
      code.achieved_eps = dec.best_eps;
      code.trial_index = t;
      code.branch_x = dec.best;
      code.sigma_hat = dec.states[static_cast<std::size_t>(dec.best)];
    }
  }
  code.rank = qmat::numerical_rank(code.sigma_hat);
  return code;
}

AchievabilityBound achievability_bound(const Matrix& sigma, const channels::Channel& n,
                                       double delta, double eta, double accuracy) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)", "delta");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)", "eta");
  const Matrix omega = entropies::channel_output_with_reference(sigma, n);
  const int dr = n.in_dim();
  const int db = n.out_dim();
  entropies::EntropyReport h;
  if (dr * db <= entropies::kMaxSmoothDim) {
    h = entropies::h_min_smooth(omega, dr, db, delta, accuracy);
    h.method = "sdp";
  } else {
    h = entropies::h_min_smooth_lower_bound(omega, dr, db, delta, accuracy);
  }
  AchievabilityBound b;
  // the certified lower end keeps the bound valid
  b.h_min_smooth = h.lower;
  b.log_theta = qmat::clamp_nonneg(-h.lower - 2.0 * std::log2(eta));
  b.eps_bound = 8.0 * (delta + eta);
  b.eps_bound_average = 4.0 * delta + 4.0 * eta;
  b.method = h.method;
  return b;
}

double converse_objective(const Matrix& sigma, const channels::Channel& n, double accuracy) {
  const Matrix omega = entropies::channel_output_with_reference(sigma, n);
  const auto h = entropies::h_min(omega, n.in_dim(), n.out_dim(), accuracy);
  return qmat::clamp_nonneg(-h.upper);
}

SearchEstimate converse_bound(const Matrix& rho_b, const channels::Channel& n, double eps,
                              const search::Options& opt, Rng& rng) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)", "epsilon");
  check_dimension(n.in_dim(), "converse_bound");
  auto f = [&n](const Matrix& s) { return converse_objective(s, n); };
  const auto res = search::minimize_over_ball(rho_b, n, eps, f, opt, rng);
  SearchEstimate out;
  out.value = res.value;
  out.heuristic = !res.exact;
  out.argmin = res.argmin;
  out.evaluations = res.evaluations;
  out.starts = res.starts;
  return out;
}

SearchEstimate asymptotic_rate(const Matrix& rho_b, const channels::Channel& n,
                               const search::Options& opt, Rng& rng) {
  const auto section = search::feasible_section(rho_b, n);
  auto f = [&n](const Matrix& s) {
    return qmat::clamp_nonneg(entropies::coherent_information(s, n));
  };
  const auto res = search::minimize_over_section(section, f, opt, rng);
  SearchEstimate out;
  out.value = res.value;
  out.heuristic = !res.exact;
  out.argmin = res.argmin;
  out.evaluations = res.evaluations;
  out.starts = res.starts;
  return out;
}

double second_order_rate(const Matrix& sigma, const channels::Channel& n, double eps,
                         long long n_uses) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)", "epsilon");
  if (n_uses < 1) throw ValidationError("n must be >= 1", "n");
  const double ic = entropies::coherent_information(sigma, n);
  const double v = entropies::channel_info_variance(sigma, n);
  const double q = normal_quantile(eps * eps / 100.0);
  return qmat::clamp_nonneg(ic - std::sqrt(v / static_cast<double>(n_uses)) * q);
}

SweepResult rank_error_sweep(const Matrix& sigma, const channels::Channel& n, int n_uses,
                             const std::vector<int>& ranks, int trials, double delta,
                             double eta, const Rng& rng) {
  if (n_uses < 1) throw ValidationError("n must be >= 1", "n");
  double total = 1.0;
  for (int k = 0; k < n_uses; ++k) total *= static_cast<double>(sigma.rows() * sigma.rows());
  if (total > kMaxTotalDim) {
    std::ostringstream msg;
    msg << "rank_error_sweep: total dimension " << std::setprecision(17) << total
        << " of A^n (x) A_R^n exceeds the cap " << kMaxTotalDim;
    throw ResourceLimitError(msg.str(), total < 9e18 ? static_cast<long long>(total) : -1);
  }
  const Matrix sn = qmat::kron_power(sigma, n_uses);
  const auto nn = n_uses == 1 ? n : channels::tensor_power(n, n_uses);
  const long long dim = sn.rows();
  SweepResult out;
  out.bound = achievability_bound(sn, nn, delta, eta);
  for (int r : ranks) {
    if (r < 1 || r > dim) {
      throw ValidationError("rank " + std::to_string(r) + " outside [1, " + std::to_string(dim) + "]",
                            "ranks");
    }
    auto code = synthesize(sn, nn, r, rng, trials);
    for (int t = 0; t < trials; ++t) {
      SweepRow row;
      row.n = n_uses;
      row.r = r;
      row.trial = t;
      row.branch_x = code.trial_branch[static_cast<std::size_t>(t)];
      row.eps = code.trial_eps[static_cast<std::size_t>(t)];
      row.average_eps = code.trial_average_eps[static_cast<std::size_t>(t)];
      row.eps_bound = out.bound.eps_bound;
      row.log_theta_bound = out.bound.log_theta;
      out.rows.push_back(row);
    }
    out.codes.push_back(std::move(code));
  }
  return out;
}

int min_rank_achieving(const Matrix& sigma, const channels::Channel& n, double eps,
                       const Rng& rng, int trials) {
  const int d = static_cast<int>(sigma.rows());
  for (int r = 1; r <= d; ++r) {
    if (synthesize(sigma, n, r, rng, trials).achieved_eps <= eps) return r;
  }
  return d;
}

}  // namespace softcover::covering
