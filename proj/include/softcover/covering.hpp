#pragma once

// Quantum soft covering: the random-unitary code synthesizer and the
// achievability, converse, asymptotic and second-order rate evaluators.

#include <cstdint>
#include <string>
#include <vector>

#include "softcover/channels.hpp"
#include "softcover/entropies.hpp"
#include "softcover/rng.hpp"
#include "softcover/search.hpp"

namespace softcover::covering {

/// Cap on dim(A^n)^2, the size of the purified input.
inline constexpr int kMaxTotalDim = 256;
inline constexpr int kDefaultTrials = 64;

/// Throws ResourceLimitError when the purified input exceeds the cap.
void check_dimension(int input_dim, const std::string& what);

/// p(x) sigma_x = Tr_{A_R}[Phi_sigma (U^dagger P_x U (x) 1)] for the
/// ceil(d/r) rank-r projectors P_x on the padded reference space.
struct BranchDecomposition {
  std::vector<double> probs;
  /// Normalized sigma_x (zero matrix when p(x) vanishes).
  std::vector<Matrix> states;
  /// 1/2 ||N(sigma_x) - N(sigma)||_1, NaN when p(x) vanishes.
  std::vector<double> eps;
  int best = -1;
  double best_eps = 0.0;
  /// sum_x p(x) eps_x.
  double average_eps = 0.0;
};

BranchDecomposition decompose(const Matrix& sigma, const channels::Channel& n, int r,
                              const Matrix& u);

struct CoveringCode {
  Matrix sigma_hat;
  /// Numerical rank of sigma_hat.
  int rank = 0;
  /// Branch rank the code was drawn with.
  int r = 0;
  double achieved_eps = 0.0;
  std::uint64_t seed = 0;
  int trial_index = 0;
  int branch_x = 0;
  /// Per-trial best-branch and ensemble-average errors.
  std::vector<double> trial_eps;
  std::vector<int> trial_branch;
  std::vector<double> trial_average_eps;
};

/// Trial t uses the Haar unitary drawn from rng.substream(t); the best code
/// is the one with smallest (eps, trial).
CoveringCode synthesize(const Matrix& sigma, const channels::Channel& n, int r,
                        const Rng& rng, int trials = kDefaultTrials);

/// 1/2 ||N(code) - target||_1.
double covering_error(const Matrix& code, const channels::Channel& n,
                      const Matrix& target);

struct AchievabilityBound {
  /// [-H_min^delta(A_R|B)_omega - 2 log eta]^+.
  double log_theta = 0.0;
  /// 8 (delta + eta).
  double eps_bound = 0.0;
  /// 4 delta + 4 eta, the ensemble-average bound.
  double eps_bound_average = 0.0;
  double h_min_smooth = 0.0;
  /// "sdp" or "clip-lower-bound".
  std::string method;
};

AchievabilityBound achievability_bound(const Matrix& sigma, const channels::Channel& n,
                                       double delta, double eta,
                                       double accuracy = entropies::kDefaultAccuracy);

struct SearchEstimate {
  double value = 0.0;
  /// False only when the feasible set is a single point.
  bool heuristic = true;
  Matrix argmin;
  int evaluations = 0;
  int starts = 0;
};

/// [-H_min(A_R|B)_omega]^+ at a given input, from the certified dual bound.
double converse_objective(const Matrix& sigma, const channels::Channel& n,
                          double accuracy = entropies::kDefaultAccuracy);

/// Heuristic estimate of inf over S_eps(rho, N) of [-H_min(A_R|B)_omega]^+.
SearchEstimate converse_bound(const Matrix& rho_b, const channels::Channel& n,
                              double eps, const search::Options& opt, Rng& rng);

/// min over S(rho, N) of [I_c(sigma, N)]^+.
SearchEstimate asymptotic_rate(const Matrix& rho_b, const channels::Channel& n,
                               const search::Options& opt, Rng& rng);

/// [I_c - sqrt(V/n) Phi^{-1}(eps^2/100)]^+, without the O(log n / n) term.
double second_order_rate(const Matrix& sigma, const channels::Channel& n, double eps,
                         long long n_uses);

struct SweepRow {
  int n = 1;
  int r = 1;
  int trial = 0;
  int branch_x = 0;
  double eps = 0.0;
  double average_eps = 0.0;
  double eps_bound = 0.0;
  double log_theta_bound = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  AchievabilityBound bound;
  /// Best code per rank, in the order of `ranks`.
  std::vector<CoveringCode> codes;
};

/// Synthesizes codes for sigma^{(x)n} through N^{(x)n} at every rank.
/// Ranks above dim(A^n) are rejected.
SweepResult rank_error_sweep(const Matrix& sigma, const channels::Channel& n, int n_uses,
                             const std::vector<int>& ranks, int trials, double delta,
                             double eta, const Rng& rng);

/// Smallest branch rank whose best code reaches error <= eps.
int min_rank_achieving(const Matrix& sigma, const channels::Channel& n, double eps,
                       const Rng& rng, int trials = kDefaultTrials);

}  // namespace softcover::covering
