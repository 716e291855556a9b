#pragma once

// Entropic quantities in bits: spectral entropies, coherent and Holevo
// information, relative entropy and information variance, and one-shot
// (smoothed) min/max entropies computed by semidefinite programming.
//
// Bipartite raw-matrix functions take the state on A (x) B with A first and
// condition on B. The signature-aware overloads take a split "A|B" naming
// the systems on either side; every other system is traced out.

#include <optional>
#include <string>
#include <vector>

#include "softcover/channels.hpp"
#include "softcover/qmat.hpp"
#include "softcover/sdp.hpp"

namespace softcover::entropies {

/// Relative eigenvalue cutoff below which eigenvalues count as zero in
/// logarithms.
inline constexpr double kEntropyCutoff = 1e-12;
/// Default target relative duality gap for the entropy programs.
inline constexpr double kDefaultAccuracy = 1e-9;
/// Largest state dimension handled by the exact smoothed programs.
inline constexpr int kMaxSmoothDim = 16;

struct EntropyReport {
  /// Value at the returned primal point, bits.
  double value = 0.0;
  /// Certified interval [lower, upper] containing the exact optimum.
  double lower = 0.0;
  double upper = 0.0;
  /// upper - lower, bits.
  double duality_gap = 0.0;
  int iterations = 0;
  /// "sdp", "closed-form", "duality" or "clip-lower-bound".
  std::string method = "sdp";
  /// Smoothing state.
  std::optional<Matrix> witness;
  /// Optimal (normalized) conditioning state, when one exists.
  std::optional<Matrix> sigma;
};

double binary_entropy(double p);

double von_neumann(const Matrix& rho);
double von_neumann(const qmat::DensityOperator& rho);
/// S(A|B) = S(AB) - S(B).
double conditional_entropy(const Matrix& rho_ab, int da, int db);
double conditional_entropy(const qmat::DensityOperator& rho, const std::string& split);
double mutual_information(const Matrix& rho_ab, int da, int db);
double mutual_information(const qmat::DensityOperator& rho, const std::string& split);

/// omega = (id (x) N)(psi_sigma) on A_R (x) B from the canonical purification.
Matrix channel_output_with_reference(const Matrix& sigma, const channels::Channel& n);
/// -S(A_R|B)_omega.
double coherent_information(const Matrix& sigma, const channels::Channel& n);
double holevo_information(const channels::Ensemble& e);

/// D(rho||sigma); throws SupportError unless supp rho is inside supp sigma.
double relative_entropy(const Matrix& rho, const Matrix& sigma);
/// Tr[rho (log rho - log sigma)^2] - D^2, bits^2.
double info_variance(const Matrix& rho, const Matrix& sigma);
/// V(omega^{A_R B} || 1_{A_R} (x) omega^B) for omega from
/// channel_output_with_reference.
double channel_info_variance(const Matrix& sigma, const channels::Channel& n);

/// Splits "A,B|C" into its two label lists.
std::pair<std::vector<std::string>, std::vector<std::string>> parse_split(
    const std::string& split);
/// Marginal on (left, right) systems in that order; sets the two dimensions.
Matrix bipartite_marginal(const qmat::DensityOperator& rho, const std::string& split,
                          int* da, int* db);

/// -log2 min Tr sigma s.t. 1 (x) sigma >= rho. Subnormalized rho allowed.
EntropyReport h_min(const Matrix& rho_ab, int da, int db,
                    double accuracy = kDefaultAccuracy);
/// max_sigma log2 F(rho, 1 (x) sigma) through the root-fidelity block.
EntropyReport h_max(const Matrix& rho_ab, int da, int db,
                    double accuracy = kDefaultAccuracy);
/// Joint program over the smoothing state, sigma and the fidelity block,
/// ball P(rho~, rho) <= eps with Tr rho~ <= 1.
EntropyReport h_min_smooth(const Matrix& rho_ab, int da, int db, double eps,
                           double accuracy = kDefaultAccuracy);
/// -H_min^eps(A|C) of a purification of rho_ab.
EntropyReport h_max_smooth(const Matrix& rho_ab, int da, int db, double eps,
                           double accuracy = kDefaultAccuracy);
/// Lower bound on H_min^eps valid in any dimension: rho~ is obtained by
/// clipping the spectrum of (1 (x) sigma)^{-1/2} rho (1 (x) sigma)^{-1/2}
/// at the smallest level that keeps P(rho~, rho) <= eps.
EntropyReport h_min_smooth_lower_bound(const Matrix& rho_ab, int da, int db,
                                       double eps,
                                       double accuracy = kDefaultAccuracy);

EntropyReport h_min(const qmat::DensityOperator& rho, const std::string& split,
                    double accuracy = kDefaultAccuracy);
EntropyReport h_max(const qmat::DensityOperator& rho, const std::string& split,
                    double accuracy = kDefaultAccuracy);
EntropyReport h_min_smooth(const qmat::DensityOperator& rho, const std::string& split,
                           double eps, double accuracy = kDefaultAccuracy);
EntropyReport h_max_smooth(const qmat::DensityOperator& rho, const std::string& split,
                           double eps, double accuracy = kDefaultAccuracy);

/// log2 lambda_max(omega^{-1/2} rho omega^{-1/2}).
EntropyReport d_max(const Matrix& rho, const Matrix& omega);
/// Smoothing restricted to supp omega; SupportError when the ball misses it.
EntropyReport d_max_smooth(const Matrix& rho, const Matrix& omega, double eps,
                           double accuracy = kDefaultAccuracy);

/// Min-entropy relative to a fixed full-rank sigma_B, in the overlap form
/// over rho~^{ABC} >= 0 with Tr(rho~ psi) >= 1 - eps^2 and Tr rho~ <= 1.
struct FixedSigmaReport {
  EntropyReport report;
  /// Dual operator E_AB of the domination constraint.
  Matrix dual_e;
  double dual_lambda = 0.0;
  double dual_mu = 0.0;
};
FixedSigmaReport h_min_smooth_fixed_sigma(const Matrix& rho_ab, int da, int db,
                                          const Matrix& sigma_b, double eps,
                                          double accuracy = kDefaultAccuracy);

/// n D(rho||sigma) - sqrt(n V(rho||sigma)) Phi^{-1}(eps^2).
double aep_second_order_rhs(const Matrix& rho, const Matrix& sigma, int n, double eps);

/// Purification sum_k sqrt(l_k) |v_k>|k> of rho on A (x) B (x) C, C = rank.
Vector purify(const Matrix& rho, int* dc);

}  // namespace softcover::entropies
