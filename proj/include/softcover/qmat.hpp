#pragma once

// Dense complex linear algebra on multipartite operators: signatures,
// tensor products, partial traces, spectral functions, distance measures,
// canonical purifications and Haar sampling.

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "softcover/errors.hpp"
#include "softcover/rng.hpp"

namespace softcover {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace qmat {

inline constexpr double kDefaultTol = 1e-9;
/// Relative eigenvalue cutoff for inverse and square-root on the support.
inline constexpr double kSupportCutoff = 1e-9;

/// Ordered subsystem dimensions with unique labels.
class SystemSignature {
 public:
  SystemSignature() = default;
  SystemSignature(std::vector<int> dims, std::vector<std::string> labels);

  static SystemSignature single(int dim, std::string label = "A");

  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return dims_.size(); }
  /// Product of all subsystem dimensions (1 for the empty signature).
  int total() const noexcept;

  bool has(std::string_view label) const noexcept;
  /// Position of `label`; throws ValidationError when absent.
  int index_of(std::string_view label) const;
  std::vector<int> indices_of(const std::vector<std::string>& labels) const;

  /// Concatenation; throws DimensionError on a label clash.
  SystemSignature concat(const SystemSignature& other) const;
  SystemSignature select(const std::vector<int>& positions) const;
  /// Same dims, every label with `suffix` appended.
  SystemSignature suffixed(std::string_view suffix) const;

  bool operator==(const SystemSignature&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

/// Hermitian PSD operator with unit trace (or trace at most one when flagged
/// subnormalized), annotated with its subsystem structure.
class DensityOperator {
 public:
  DensityOperator(Matrix mat, SystemSignature sig, double tol = kDefaultTol,
                  bool subnormalized = false);
  /// Single system labelled "A".
  explicit DensityOperator(Matrix mat, double tol = kDefaultTol,
                           bool subnormalized = false);

  static DensityOperator maximally_mixed(int dim, std::string label = "A");
  static DensityOperator basis_state(int dim, int index,
                                     std::string label = "A");

  const Matrix& mat() const noexcept { return mat_; }
  const SystemSignature& sig() const noexcept { return sig_; }
  int dim() const noexcept { return static_cast<int>(mat_.rows()); }
  double tol() const noexcept { return tol_; }
  bool subnormalized() const noexcept { return subnormalized_; }
  double trace() const { return mat_.trace().real(); }

  DensityOperator relabeled(SystemSignature sig) const;

 private:
  Matrix mat_;
  SystemSignature sig_;
  double tol_;
  bool subnormalized_;
};

/// Unit vector with subsystem structure.
class PureState {
 public:
  PureState(Vector vec, SystemSignature sig, double tol = kDefaultTol);

  const Vector& vec() const noexcept { return vec_; }
  const SystemSignature& sig() const noexcept { return sig_; }
  DensityOperator projector() const;

 private:
  Vector vec_;
  SystemSignature sig_;
};

/// Eigen-decomposition with eigenvalues sorted in descending order.
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;
};

// ---------------------------------------------------------------------------
// Raw matrix layer. Subsystem dimensions are passed explicitly; subsystems
// are ordered with the first one most significant in the row-major index.

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Matrix kron_power(const Matrix& a, int n);

/// Trace out every subsystem not listed in `keep` (positions, any order;
/// the result follows ascending position order).
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     std::vector<int> keep);

/// Reorder subsystems: new position k holds old subsystem `order[k]`.
Matrix permute_systems(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& order);
Vector permute_systems(const Vector& v, const std::vector<int>& dims,
                       const std::vector<int>& order);

/// Max-norm asymmetry ||H - H^dagger||_max.
double hermiticity_defect(const Matrix& h);

/// Symmetrizes then diagonalizes. Throws ValidationError when `h` is not
/// Hermitian within tol * max(1, ||h||_max).
EigenDecomposition eigh(const Matrix& h, double tol = kDefaultTol);

/// f applied to the spectrum of Hermitian h.
Matrix spectral_apply(const Matrix& h, const std::function<double(double)>& f,
                      double tol = kDefaultTol);

/// Square root of a PSD matrix; eigenvalues at or below 1e-14 * lambda_max
/// (rounding level) map to zero.
Matrix sqrt_psd(const Matrix& h);
/// Pseudo-inverse square root; eigenvalues below cutoff * lambda_max count
/// as exactly zero.
Matrix inv_sqrt_psd(const Matrix& h, double cutoff = kSupportCutoff);
Matrix pinv_psd(const Matrix& h, double cutoff = kSupportCutoff);
/// log2 on the support, zero on the kernel.
Matrix log2_psd(const Matrix& h, double cutoff = kSupportCutoff);
/// Orthogonal projector onto eigenvalues above cutoff * lambda_max.
Matrix support_projector(const Matrix& h, double cutoff = kSupportCutoff);
/// Orthonormal basis (columns) of the support.
Matrix support_basis(const Matrix& h, double cutoff = kSupportCutoff);
int numerical_rank(const Matrix& h, double cutoff = kSupportCutoff);

/// Transpose in the fixed computational basis.
Matrix transpose(const Matrix& m);

double trace_norm(const Matrix& m);
double trace_distance(const Matrix& rho, const Matrix& sigma);
/// ||sqrt(rho) sqrt(sigma)||_1^2, no normalization assumed.
double fidelity(const Matrix& rho, const Matrix& sigma);
double fidelity_star(const Matrix& rho, const Matrix& sigma);
double purified_distance(const Matrix& rho, const Matrix& sigma);

/// max(x, 0).
inline double clamp_nonneg(double x) noexcept { return x > 0.0 ? x : 0.0; }

bool is_finite(const Matrix& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& h);
double max_eigenvalue(const Matrix& h);

/// Haar-random d x d unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) moved into Q.
Matrix haar_unitary(int dim, Rng& rng);
/// Ginibre-distributed density matrix of the given rank (0 means full).
Matrix random_density(int dim, Rng& rng, int rank = 0);
Vector random_pure(int dim, Rng& rng);
/// Random Hermitian matrix with i.i.d. Gaussian entries.
Matrix random_hermitian(int dim, Rng& rng);

// ---------------------------------------------------------------------------
// Signature-aware layer.

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);
/// Reorder subsystems by label.
DensityOperator permute(const DensityOperator& rho,
                        const std::vector<std::string>& order);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity_star(const DensityOperator& rho, const DensityOperator& sigma);
double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma);

/// (1 (x) sqrt(rho)) |Gamma> on R (x) A, normalized by sqrt(Tr rho).
/// Reference labels are the system labels suffixed with `ref_suffix`.
PureState canonical_purification(const DensityOperator& rho,
                                 std::string_view ref_suffix = "_R");
/// Coefficient vector of the canonical purification, reference first.
Vector canonical_purification_vector(const Matrix& rho);

DensityOperator transpose(const DensityOperator& rho);

}  // namespace qmat
}  // namespace softcover
