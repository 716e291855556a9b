#include "softcover/protocols.hpp"

#include <cmath>
#include <limits>

#include "softcover/entropies.hpp"
#include "softcover/errors.hpp"

namespace softcover::protocols {

namespace {

constexpr int kMaxDistortionDim = 256;

long long ipow(long long base, int e) {
  long long out = 1;
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

channels::Channel power(const channels::Channel& n, int copies) {
  return copies == 1 ? n : channels::tensor_power(n, copies);
}

void check_distortion_dim(const SourceCodingSetup& setup, int n, const char* what) {
  const long long total = ipow(static_cast<long long>(setup.source_dim()) *
                                   setup.reconstruction_dim(),
                               n);
  if (total > kMaxDistortionDim) {
    throw ResourceLimitError(std::string(what) + ": total dimension " + std::to_string(total) +
                                 " of B_R^n (x) A^n exceeds the cap " +
                                 std::to_string(kMaxDistortionDim),
                             total);
  }
}

// (id (x) D o E)(Psi_rho) on B_R^n (x) A^n.
Matrix protocol_output(const SourceCodingSetup& setup, const CompressionProtocol& p) {
  const int db = static_cast<int>(ipow(setup.source_dim(), p.n));
  const int da = static_cast<int>(ipow(setup.reconstruction_dim(), p.n));
  if (p.encoder.in_dim() != db || p.decoder.out_dim() != da ||
      p.encoder.out_dim() != p.decoder.in_dim()) {
    throw DimensionError("protocol does not match the source coding setup");
  }
  const Vector psi = qmat::canonical_purification_vector(qmat::kron_power(setup.rho_b, p.n));
  const Matrix m = p.encoder.apply_on(psi * psi.adjoint(), {db, db}, 1);
  return p.decoder.apply_on(m, {db, p.encoder.out_dim()}, 1);
}

}  // namespace

void SourceCodingSetup::validate() const {
  if (rho_b.rows() != n_w.out_dim()) {
    throw DimensionError("source has dimension " + std::to_string(rho_b.rows()) +
                         ", posterior channel outputs " + std::to_string(n_w.out_dim()));
  }
  qmat::DensityOperator check(rho_b, qmat::SystemSignature::single(source_dim(), "B"));
  (void)check;
}

CompressionProtocol compression_from_covering(const SourceCodingSetup& setup,
                                              const Matrix& code, int n) {
  setup.validate();
  if (n < 1) throw ValidationError("n must be >= 1", "n");
  check_distortion_dim(setup, n, "compression_from_covering");
  const auto nw = power(setup.n_w, n);
  if (code.rows() != nw.in_dim()) throw DimensionError("covering code has the wrong dimension");

  const auto& w = nw.stinespring();
  const auto vt = channels::posterior_reference_map(code, w);
  const Matrix code_t = code.transpose();
  const Matrix u = qmat::support_basis(code_t);
  const auto ed = qmat::eigh(code_t);
  const auto nv = channels::channel_of_isometry(vt, ed.vectors.col(0));

  std::vector<Matrix> enc;
  for (const auto& k : nv.kraus()) enc.push_back(u.adjoint() * k);
  CompressionProtocol p{channels::Channel(std::move(enc), "encoder"),
                        channels::Channel({u}, "decoder"),
                        static_cast<int>(u.cols()),
                        n,
                        0.0,
                        covering::covering_error(code, nw, qmat::kron_power(setup.rho_br(), n))};
  p.measured_distortion = distortion(setup, p);
  return p;
}

double distortion(const SourceCodingSetup& setup, const CompressionProtocol& p) {
  setup.validate();
  check_distortion_dim(setup, p.n, "distortion");
  const int db = static_cast<int>(ipow(setup.source_dim(), p.n));
  const int da = static_cast<int>(ipow(setup.reconstruction_dim(), p.n));
  const Matrix omega = protocol_output(setup, p);
  const Matrix omega_a = qmat::partial_trace(omega, {db, da}, {1});
  const Vector psi = qmat::canonical_purification_vector(omega_a);
  const auto nw = power(setup.n_w, p.n);
  const Matrix ideal = nw.apply_on(psi * psi.adjoint(), {da, da}, 0);
  return qmat::trace_distance(omega, ideal);
}

covering::CoveringCode covering_from_compression(const SourceCodingSetup& setup,
                                                 const CompressionProtocol& p) {
  const auto& k = p.decoder.kraus();
  const int m = p.decoder.in_dim();
  if (k.size() != 1 ||
      (k[0].adjoint() * k[0] - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("covering_from_compression needs an isometric decoder", "decoder");
  }
  const int db = static_cast<int>(ipow(setup.source_dim(), p.n));
  const int da = static_cast<int>(ipow(setup.reconstruction_dim(), p.n));
  const Matrix omega = protocol_output(setup, p);
  const Matrix omega_a = qmat::partial_trace(omega, {db, da}, {1});
  const auto nw = power(setup.n_w, p.n);
  covering::CoveringCode code;
  code.sigma_hat = omega_a.transpose();
  code.rank = qmat::numerical_rank(code.sigma_hat);
  code.r = code.rank;
  code.achieved_eps =
      covering::covering_error(code.sigma_hat, nw, qmat::kron_power(setup.rho_br(), p.n));
  return code;
}

double lossy_converse_objective(const Matrix& sigma_ar, const channels::Channel& n_w,
                                double smoothing) {
  const Matrix omega = entropies::channel_output_with_reference(sigma_ar, n_w);
  const auto h = entropies::h_min_smooth(omega, n_w.in_dim(), n_w.out_dim(), smoothing);
  return qmat::clamp_nonneg(-h.upper);
}

LossyBounds oneshot_lossy_bounds(const SourceCodingSetup& setup, const Matrix& sigma_ar,
                                 double delta, double eta, double eps,
                                 const search::Options& opt, Rng& rng) {
  setup.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)", "epsilon");
  const auto ach = covering::achievability_bound(sigma_ar, setup.n_w, delta, eta);
  LossyBounds b;
  b.achievable_log_theta = ach.log_theta;
  b.achievable_eps = ach.eps_bound_average;
  b.achievable_eps_covering = ach.eps_bound;
  b.method = ach.method;
  const double s = std::sqrt(eps);
  auto f = [&](const Matrix& x) { return lossy_converse_objective(x, setup.n_w, s); };
  const auto res = search::minimize_over_ball(setup.rho_br(), setup.n_w, eps, f, opt, rng);
  b.converse_log_theta = res.value;
  b.converse_heuristic = !res.exact;
  b.converse_evaluations = res.evaluations;
  return b;
}

covering::SearchEstimate asymptotic_lossy_rate(const SourceCodingSetup& setup,
                                               const search::Options& opt, Rng& rng) {
  setup.validate();
  return covering::asymptotic_rate(setup.rho_br(), setup.n_w, opt, rng);
}

covering::SearchEstimate resolvability_lower(const Matrix& sigma, const channels::Channel& n,
                                             double eps, const search::Options& opt,
                                             Rng& rng) {
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive", "epsilon");
  // ||.||_1 <= eps is the half-norm ball of radius eps/2
  return covering::converse_bound(n.apply(sigma), n, std::min(eps / 2.0, 0.999999), opt, rng);
}

bool has_ppt_choi(const channels::Channel& n, double tol) {
  const int din = n.in_dim();
  const int dout = n.out_dim();
  const Matrix& j = n.choi();
  Matrix pt(j.rows(), j.cols());
  for (int i = 0; i < din; ++i) {
    for (int k = 0; k < din; ++k) {
      pt.block(k * dout, i * dout, dout, dout) = j.block(i * dout, k * dout, dout, dout);
    }
  }
  return qmat::min_eigenvalue(0.5 * (pt + pt.adjoint())) >= -tol;
}

std::optional<double> resolvability_upper(const channels::Channel& n) {
  if (n.name() == "identity") return std::log2(static_cast<double>(n.in_dim()));
  if (has_ppt_choi(n)) return 0.0;
  return std::nullopt;
}

void IdBoundInput::validate() const {
  if (n < 1) throw ValidationError("n must be >= 1", "n");
  if (dim_a < 1) throw ValidationError("|A| must be >= 1", "dim");
  if (!(lambda1 > 0.0)) throw ValidationError("lambda1 must be positive", "lambda1");
  if (!(lambda2 > 0.0)) throw ValidationError("lambda2 must be positive", "lambda2");
  if (!(lambda1 + lambda2 < 1.0)) {
    throw ValidationError("lambda1 + lambda2 must be below 1", "lambda1");
  }
}

double sim_id_bound(const IdBoundInput& in) {
  in.validate();
  const double gap = 1.0 - in.lambda1 - in.lambda2;
  const double nn = static_cast<double>(in.n);
  return (nn * std::log2(static_cast<double>(in.dim_a)) + std::log2(2304.0 / (gap * gap)) +
          std::log2(std::log2(120.0 / gap))) /
         nn;
}

std::optional<double> unrestricted_id_upper(const channels::Channel& n) {
  const auto q = resolvability_upper(n);
  if (!q) return std::nullopt;
  return std::log2(static_cast<double>(n.in_dim())) + *q;
}

double epsilon_net_cardinality(int dim, double delta) {
  if (dim < 1) throw ValidationError("dim must be >= 1", "dim");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)", "delta");
  return 2.0 * dim * std::log2(5.0 / delta);
}

}  // namespace softcover::protocols
