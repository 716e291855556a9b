#pragma once

// Applications of soft covering: lossy compression through posterior
// reference maps, resolvability bounds, and identification bounds.

#include <optional>
#include <string>

#include "softcover/channels.hpp"
#include "softcover/covering.hpp"
#include "softcover/search.hpp"

namespace softcover::protocols {

/// Source rho_B and posterior channel N_W: A_R -> B_R. The reconstruction
/// space A has the input dimension of N_W.
struct SourceCodingSetup {
  Matrix rho_b;
  channels::Channel n_w;

  int source_dim() const { return static_cast<int>(rho_b.rows()); }
  int reconstruction_dim() const { return n_w.in_dim(); }
  /// rho^{B_R} = (rho^B)^T.
  Matrix rho_br() const { return rho_b.transpose(); }
  /// Throws DimensionError / ValidationError on inconsistent data.
  void validate() const;
};

struct CompressionProtocol {
  channels::Channel encoder;  // B^n -> M
  channels::Channel decoder;  // M -> A^n
  int message_dim = 0;
  int n = 1;
  double measured_distortion = 0.0;
  /// Error of the covering code the protocol was built from, when known.
  std::optional<double> code_eps;
};

/// Encoder-decoder pair U^dagger N_V~ U and U, with V~ the posterior
/// reference isometry of W^{(x)n} with respect to the code state and U the
/// embedding of supp (sigma^T). `code` lives on A_R^n.
CompressionProtocol compression_from_covering(const SourceCodingSetup& setup,
                                              const Matrix& code, int n);

/// 1/2 || omega^{B_R^n A^n} - (N_W^{(x)n} (x) id) Psi_omega ||_1.
double distortion(const SourceCodingSetup& setup, const CompressionProtocol& p);

/// Reference marginal of the protocol output; requires an isometric decoder.
covering::CoveringCode covering_from_compression(const SourceCodingSetup& setup,
                                                 const CompressionProtocol& p);

struct LossyBounds {
  /// [-H_min^delta(A|B_R) - 2 log eta]^+ at the supplied sigma^{A_R}.
  double achievable_log_theta = 0.0;
  /// 4 delta + 4 eta.
  double achievable_eps = 0.0;
  /// 8 (delta + eta), the covering-lemma constant.
  double achievable_eps_covering = 0.0;
  /// Estimate of inf over S_eps of [-H_min^{sqrt eps}(A|B_R)]^+.
  double converse_log_theta = 0.0;
  bool converse_heuristic = true;
  int converse_evaluations = 0;
  std::string method;
};

/// [-H_min^{s}(A|B_R)]^+ of (N_W (x) id) Psi_sigma, certified lower end.
double lossy_converse_objective(const Matrix& sigma_ar, const channels::Channel& n_w,
                                double smoothing);

LossyBounds oneshot_lossy_bounds(const SourceCodingSetup& setup, const Matrix& sigma_ar,
                                 double delta, double eta, double eps,
                                 const search::Options& opt, Rng& rng);

covering::SearchEstimate asymptotic_lossy_rate(const SourceCodingSetup& setup,
                                               const search::Options& opt, Rng& rng);

/// inf over ||N(sigma) - N(omega)||_1 <= eps of [-H_min(A_R|B)]^+.
covering::SearchEstimate resolvability_lower(const Matrix& sigma, const channels::Channel& n,
                                             double eps, const search::Options& opt,
                                             Rng& rng);

/// Registry value of the strong converse quantum capacity: log2 d for
/// identity channels, 0 for channels with a PPT Choi matrix, otherwise empty.
std::optional<double> resolvability_upper(const channels::Channel& n);

/// True when the Choi matrix has a positive partial transpose.
bool has_ppt_choi(const channels::Channel& n, double tol = 1e-10);

struct IdBoundInput {
  long long n = 1;
  int dim_a = 2;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  void validate() const;
};

/// (n log|A| + log(2304/(1-l1-l2)^2) + log log(120/(1-l1-l2))) / n.
double sim_id_bound(const IdBoundInput& in);

/// log2 |A| + Q^(N), empty when Q^ is not in the registry.
std::optional<double> unrestricted_id_upper(const channels::Channel& n);

/// log2 of the (5/delta)^{2 dim} net size.
double epsilon_net_cardinality(int dim, double delta);

}  // namespace softcover::protocols
