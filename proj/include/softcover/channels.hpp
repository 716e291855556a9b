#pragma once

// CPTP maps in Kraus / Choi / Stinespring form, tensor powers, and the
// posterior reference map with its Petz-recovery counterpart.

#include <memory>
#include <string>
#include <vector>

#include "softcover/json_io.hpp"
#include "softcover/qmat.hpp"

namespace softcover::channels {

/// Isometry V: in -> out (x) env, output index most significant. `support`
/// is the projector on the input space where V is isometric (V^dagger V).
struct StinespringIsometry {
  Matrix V;
  qmat::SystemSignature in_sig;
  qmat::SystemSignature out_sig;
  qmat::SystemSignature env_sig;
  Matrix support;

  int in_dim() const { return in_sig.total(); }
  int out_dim() const { return out_sig.total(); }
  int env_dim() const { return env_sig.total(); }
  /// Kraus operators (1 (x) <e|) V.
  std::vector<Matrix> kraus() const;
  /// Tr_env V rho V^dagger.
  Matrix apply(const Matrix& rho) const;
  /// max |V^dagger V - support|.
  double isometry_defect() const;
};

/// Probability vector with one state per outcome.
struct Ensemble {
  std::vector<double> probs;
  std::vector<Matrix> states;

  /// Throws ValidationError on negative or unnormalized probabilities,
  /// invalid states or mismatched dimensions.
  void validate(double tol = qmat::kDefaultTol) const;
  /// sum_x P(x) |x><x| (x) W_x, classical register first.
  Matrix cq_state() const;
  Matrix average() const;
};

class Channel {
 public:
  Channel(std::vector<Matrix> kraus, qmat::SystemSignature in_sig,
          qmat::SystemSignature out_sig, std::string name = "custom",
          json params = json::object());
  /// Single-system signatures "A" -> "B".
  Channel(std::vector<Matrix> kraus, std::string name = "custom",
          json params = json::object());

  /// Kraus form recovered from an unnormalized Choi matrix on in (x) out.
  static Channel from_choi(const Matrix& choi, qmat::SystemSignature in_sig,
                           qmat::SystemSignature out_sig,
                           double tol = qmat::kDefaultTol);

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const qmat::SystemSignature& in_sig() const noexcept { return in_sig_; }
  const qmat::SystemSignature& out_sig() const noexcept { return out_sig_; }
  int in_dim() const noexcept { return in_sig_.total(); }
  int out_dim() const noexcept { return out_sig_.total(); }
  const std::string& name() const noexcept { return name_; }
  const json& params() const noexcept { return params_; }

  /// Unnormalized Choi matrix sum_ij |i><j| (x) N(|i><j|), trace = in_dim.
  const Matrix& choi() const { return *choi_; }
  /// Dilation with env dimension max(#Kraus, out_dim).
  const StinespringIsometry& stinespring() const { return *stinespring_; }

  Matrix apply(const Matrix& rho) const;
  qmat::DensityOperator apply(const qmat::DensityOperator& rho) const;
  Matrix apply_adjoint(const Matrix& x) const;
  /// Acts on subsystem `position` of an operator with subsystem dims `dims`;
  /// the result carries out_dim at that position.
  Matrix apply_on(const Matrix& rho, const std::vector<int>& dims,
                  int position) const;

  json to_json() const;
  static Channel from_json(const json& j);

 private:
  std::vector<Matrix> kraus_;
  qmat::SystemSignature in_sig_;
  qmat::SystemSignature out_sig_;
  std::string name_;
  json params_;
  std::shared_ptr<const Matrix> choi_;
  std::shared_ptr<const StinespringIsometry> stinespring_;
};

/// Throws ValidationError unless sum K^dagger K = 1 within 1e-8 and the
/// Choi matrix has no eigenvalue below -tol.
void verify_cptp(const Channel& n, double tol = qmat::kDefaultTol);
/// Non-throwing variant.
bool is_cptp(const Channel& n, double tol = qmat::kDefaultTol);

Matrix choi_of(const Channel& n);
/// Kraus operators K[o,i] = sqrt(l) v[i*dout + o] from the Choi eigenpairs.
std::vector<Matrix> kraus_of_choi(const Matrix& choi, int din, int dout,
                                  double tol = qmat::kDefaultTol);
StinespringIsometry stinespring_of_kraus(const std::vector<Matrix>& kraus,
                                         const qmat::SystemSignature& in_sig,
                                         const qmat::SystemSignature& out_sig);

/// N^{(x)n}; labels get the copy index appended. Kraus sets longer than
/// din*dout are replaced by the minimal Choi-derived set.
Channel tensor_power(const Channel& n, int copies);
Channel tensor(const Channel& a, const Channel& b);
/// second o first.
Channel compose(const Channel& second, const Channel& first);

/// Channel Tr_env V . V^dagger. Off the support of V^dagger V the input is
/// sent to |fallback><fallback| so that the result is trace preserving.
Channel channel_of_isometry(const StinespringIsometry& v,
                            const Vector& fallback);

/// Posterior reference map W: A_R -> B_R (x) E of V: B -> A (x) E with
/// respect to rho_B, defined on the support of (N_V(rho_B))^T:
/// W|a-bar> = lambda_a^{-1/2} (1 (x) (<a| (x) 1) V) |psi_rho>.
StinespringIsometry posterior_reference_map(
    const Matrix& rho_b, const StinespringIsometry& v,
    double cutoff = qmat::kSupportCutoff);

/// (rho^{B_R})^{1/2} (N_V^dagger((rho^A)^{-1/2} sigma^A (rho^A)^{-1/2}))^T
/// (rho^{B_R})^{1/2} with sigma^A = sigma_AR^T. Throws SupportError when
/// sigma^A leaves the support of rho^A by more than tol.
Matrix petz_recovery_apply(const Matrix& rho_b, const Channel& n_v,
                           const Matrix& sigma_ar,
                           double tol = qmat::kDefaultTol);

/// Kraus operators of a random channel: the columns of a Haar isometry.
Channel random_channel(int din, int dout, int nkraus, Rng& rng);
/// Haar-random isometry din -> dout*denv.
StinespringIsometry random_isometry(int din, int dout, int denv, Rng& rng);

}  // namespace softcover::channels
