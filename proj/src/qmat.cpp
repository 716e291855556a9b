#include "softcover/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace softcover::qmat {

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int s = static_cast<int>(dims.size()) - 2; s >= 0; --s) {
    strides[s] = strides[s + 1] * dims[s + 1];
  }
  return strides;
}

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
}

void check_dims(const Matrix& m, const std::vector<int>& dims,
                const char* what) {
  check_square(m, what);
  if (product(dims) != m.rows()) {
    throw DimensionError(std::string(what) + ": subsystem dims multiply to " +
                         std::to_string(product(dims)) + " but matrix has " +
                         std::to_string(m.rows()) + " rows");
  }
}

// Old row-major index for every new index after reordering subsystems.
std::vector<int> permutation_map(const std::vector<int>& dims,
                                 const std::vector<int>& order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) {
    throw DimensionError("permute_systems: order has wrong length");
  }
  std::vector<int> seen(n, 0);
  for (int o : order) {
    if (o < 0 || o >= n || seen[o]++) {
      throw DimensionError("permute_systems: order is not a permutation");
    }
  }
  std::vector<int> new_dims(n);
  for (int k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  const int total = product(dims);
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    int old_idx = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (idx / new_strides[k]) % new_dims[k];
      old_idx += digit * old_strides[order[k]];
    }
    map[idx] = old_idx;
  }
  return map;
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemSignature

SystemSignature::SystemSignature(std::vector<int> dims,
                                 std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.size() != labels_.size()) {
    throw DimensionError("SystemSignature: dims and labels differ in length");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) {
      throw DimensionError("SystemSignature: dimension of '" + labels_[i] +
                           "' must be positive");
    }
    if (!seen.insert(labels_[i]).second) {
      throw DimensionError("SystemSignature: duplicate label '" + labels_[i] +
                           "'");
    }
  }
}

SystemSignature SystemSignature::single(int dim, std::string label) {
  return SystemSignature({dim}, {std::move(label)});
}

int SystemSignature::total() const noexcept { return product(dims_); }

bool SystemSignature::has(std::string_view label) const noexcept {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int SystemSignature::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw ValidationError("unknown system label '" + std::string(label) + "'",
                          "label");
  }
  return static_cast<int>(it - labels_.begin());
}

std::vector<int> SystemSignature::indices_of(
    const std::vector<std::string>& labels) const {
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

SystemSignature SystemSignature::concat(const SystemSignature& other) const {
  auto dims = dims_;
  auto labels = labels_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return SystemSignature(std::move(dims), std::move(labels));
}

SystemSignature SystemSignature::select(
    const std::vector<int>& positions) const {
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (int p : positions) {
    dims.push_back(dims_.at(p));
    labels.push_back(labels_.at(p));
  }
  return SystemSignature(std::move(dims), std::move(labels));
}

SystemSignature SystemSignature::suffixed(std::string_view suffix) const {
  auto labels = labels_;
  for (auto& l : labels) l += suffix;
  return SystemSignature(dims_, std::move(labels));
}

// ---------------------------------------------------------------------------
// DensityOperator / PureState

DensityOperator::DensityOperator(Matrix mat, SystemSignature sig, double tol,
                                 bool subnormalized)
    : mat_(std::move(mat)),
      sig_(std::move(sig)),
      tol_(tol),
      subnormalized_(subnormalized) {
  if (tol_ < 0.0) throw ValidationError("negative tolerance", "tol");
  check_square(mat_, "DensityOperator");
  if (sig_.total() != mat_.rows()) {
    throw DimensionError("DensityOperator: signature dimension " +
                         std::to_string(sig_.total()) +
                         " does not match matrix dimension " +
                         std::to_string(mat_.rows()));
  }
  if (!is_finite(mat_)) {
    throw ValidationError("DensityOperator: non-finite entries", "state");
  }
  if (hermiticity_defect(mat_) > tol_ * std::max(1.0, mat_.cwiseAbs().maxCoeff())) {
    throw ValidationError("DensityOperator: matrix is not Hermitian", "state");
  }
  mat_ = (0.5 * (mat_ + mat_.adjoint())).eval();
  const double lmin = min_eigenvalue(mat_);
  if (lmin < -tol_) {
    throw ValidationError("DensityOperator: negative eigenvalue " +
                              std::to_string(lmin),
                          "state");
  }
  const double tr = trace();
  if (subnormalized_) {
    if (tr > 1.0 + tol_ || tr < -tol_) {
      throw ValidationError("DensityOperator: subnormalized trace " +
                                std::to_string(tr) + " outside [0, 1]",
                            "state");
    }
  } else if (std::abs(tr - 1.0) > tol_) {
    throw ValidationError(
        "DensityOperator: trace " + std::to_string(tr) + " is not 1", "state");
  }
}

DensityOperator::DensityOperator(Matrix mat, double tol, bool subnormalized)
    : DensityOperator(mat, SystemSignature::single(static_cast<int>(mat.rows())),
                      tol, subnormalized) {}

DensityOperator DensityOperator::maximally_mixed(int dim, std::string label) {
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim),
                         SystemSignature::single(dim, std::move(label)));
}

DensityOperator DensityOperator::basis_state(int dim, int index,
                                             std::string label) {
  if (index < 0 || index >= dim) {
    throw ValidationError("basis_state: index out of range", "index");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityOperator(std::move(m),
                         SystemSignature::single(dim, std::move(label)));
}

DensityOperator DensityOperator::relabeled(SystemSignature sig) const {
  return DensityOperator(mat_, std::move(sig), tol_, subnormalized_);
}

PureState::PureState(Vector vec, SystemSignature sig, double tol)
    : vec_(std::move(vec)), sig_(std::move(sig)) {
  if (sig_.total() != vec_.size()) {
    throw DimensionError("PureState: signature does not match vector length");
  }
  if (std::abs(vec_.norm() - 1.0) > tol) {
    throw ValidationError("PureState: vector is not normalized", "state");
  }
}

DensityOperator PureState::projector() const {
  return DensityOperator(vec_ * vec_.adjoint(), sig_);
}

// ---------------------------------------------------------------------------
// Raw matrix layer

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix kron_power(const Matrix& a, int n) {
  if (n < 1) throw ValidationError("kron_power: n must be >= 1", "n");
  Matrix out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     std::vector<int> keep) {
  check_dims(m, dims, "partial_trace");
  const int n = static_cast<int>(dims.size());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: bad position");
  }
  std::vector<char> kept(n, 0);
  for (int k : keep) kept[k] = 1;

  std::vector<int> keep_dims, trace_dims;
  for (int s = 0; s < n; ++s) (kept[s] ? keep_dims : trace_dims).push_back(dims[s]);
  const int dk = product(keep_dims);
  const int dt = product(trace_dims);
  const auto strides = strides_of(dims);

  // full index for every (kept, traced) pair
  std::vector<int> full(static_cast<std::size_t>(dk) * dt);
  const int total = product(dims);
  for (int idx = 0; idx < total; ++idx) {
    int ki = 0, ti = 0;
    for (int s = 0; s < n; ++s) {
      const int digit = (idx / strides[s]) % dims[s];
      if (kept[s]) {
        ki = ki * dims[s] + digit;
      } else {
        ti = ti * dims[s] + digit;
      }
    }
    full[static_cast<std::size_t>(ti) * dk + ki] = idx;
  }

  Matrix out = Matrix::Zero(dk, dk);
  for (int t = 0; t < dt; ++t) {
    const int* base = &full[static_cast<std::size_t>(t) * dk];
    for (int a = 0; a < dk; ++a) {
      for (int b = 0; b < dk; ++b) out(a, b) += m(base[a], base[b]);
    }
  }
  return out;
}

Matrix permute_systems(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& order) {
  check_dims(m, dims, "permute_systems");
  const auto map = permutation_map(dims, order);
  const int total = static_cast<int>(map.size());
  Matrix out(total, total);
  for (int j = 0; j < total; ++j) {
    for (int i = 0; i < total; ++i) out(i, j) = m(map[i], map[j]);
  }
  return out;
}

Vector permute_systems(const Vector& v, const std::vector<int>& dims,
                       const std::vector<int>& order) {
  if (product(dims) != v.size()) {
    throw DimensionError("permute_systems: vector length mismatch");
  }
  const auto map = permutation_map(dims, order);
  Vector out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(i) = v(map[i]);
  return out;
}

double hermiticity_defect(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

EigenDecomposition eigh(const Matrix& h, double tol) {
  check_square(h, "eigh");
  if (h.size() == 0) return {};
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > tol * scale) {
    throw ValidationError("eigh: matrix is not Hermitian within tolerance",
                          "matrix");
  }
  Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("eigh: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Matrix spectral_apply(const Matrix& h, const std::function<double(double)>& f,
                      double tol) {
  const auto ed = eigh(h, tol);
  RealVector fv(ed.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) fv(k) = f(ed.values(k));
  return ed.vectors * fv.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

Matrix sqrt_psd(const Matrix& h) {
  const auto ed = eigh(h);
  const double floor = 1e-14 * std::max(ed.values.size() ? ed.values(0) : 0.0, 0.0);
  RealVector fv(ed.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) {
    fv(k) = ed.values(k) > floor ? std::sqrt(ed.values(k)) : 0.0;
  }
  return ed.vectors * fv.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

namespace {
double cutoff_value(const RealVector& values, double cutoff) {
  if (values.size() == 0) return 0.0;
  return cutoff * std::max(values(0), 0.0);
}
}  // namespace

Matrix inv_sqrt_psd(const Matrix& h, double cutoff) {
  const auto ed = eigh(h);
  const double thr = cutoff_value(ed.values, cutoff);
  RealVector fv(ed.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) {
    fv(k) = ed.values(k) > thr && ed.values(k) > 0.0 ? 1.0 / std::sqrt(ed.values(k)) : 0.0;
  }
  return ed.vectors * fv.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

Matrix pinv_psd(const Matrix& h, double cutoff) {
  const auto ed = eigh(h);
  const double thr = cutoff_value(ed.values, cutoff);
  RealVector fv(ed.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) {
    fv(k) = ed.values(k) > thr && ed.values(k) > 0.0 ? 1.0 / ed.values(k) : 0.0;
  }
  return ed.vectors * fv.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

Matrix log2_psd(const Matrix& h, double cutoff) {
  const auto ed = eigh(h);
  const double thr = cutoff_value(ed.values, cutoff);
  RealVector fv(ed.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) {
    fv(k) = ed.values(k) > thr && ed.values(k) > 0.0 ? std::log2(ed.values(k)) : 0.0;
  }
  return ed.vectors * fv.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
}

Matrix support_basis(const Matrix& h, double cutoff) {
  const auto ed = eigh(h);
  const double thr = cutoff_value(ed.values, cutoff);
  Eigen::Index k = 0;
  while (k < ed.values.size() && ed.values(k) > thr && ed.values(k) > 0.0) ++k;
  return ed.vectors.leftCols(k);
}

Matrix support_projector(const Matrix& h, double cutoff) {
  const Matrix b = support_basis(h, cutoff);
  return b * b.adjoint();
}

int numerical_rank(const Matrix& h, double cutoff) {
  return static_cast<int>(support_basis(h, cutoff).cols());
}

Matrix transpose(const Matrix& m) { return m.transpose(); }

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(rho - sigma);
}

namespace {

// F with rho = F F^dagger; rounding-level eigenvalues are dropped so that
// their square roots do not leak into the singular values.
Matrix psd_factor(const Matrix& h) {
  const auto ed = eigh(h);
  const double floor = 1e-14 * std::max(ed.values.size() ? ed.values(0) : 0.0, 0.0);
  int keep = 0;
  while (keep < ed.values.size() && ed.values(keep) > floor) ++keep;
  Matrix f(h.rows(), std::max(keep, 1));
  f.setZero();
  for (int k = 0; k < keep; ++k) f.col(k) = std::sqrt(ed.values(k)) * ed.vectors.col(k);
  return f;
}

}  // namespace

double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  // ||sqrt(rho) sqrt(sigma)||_1 = ||F_rho^dagger F_sigma||_1
  const Matrix m = psd_factor(rho).adjoint() * psd_factor(sigma);
  Eigen::JacobiSVD<Matrix> svd(m);
  const double root = svd.singularValues().sum();
  return root * root;
}

double fidelity_star(const Matrix& rho, const Matrix& sigma) {
  const double root = std::sqrt(fidelity(rho, sigma));
  const double tr_r = rho.trace().real();
  const double tr_s = sigma.trace().real();
  const double extra = std::sqrt(clamp_nonneg(1.0 - tr_r) * clamp_nonneg(1.0 - tr_s));
  const double f = root + extra;
  return std::min(f * f, 1.0);
}

double purified_distance(const Matrix& rho, const Matrix& sigma) {
  return std::sqrt(clamp_nonneg(1.0 - fidelity_star(rho, sigma)));
}

bool is_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

double min_eigenvalue(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(h.rows() - 1);
}

namespace {
Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im) * M_SQRT1_2;
    }
  }
  return g;
}
}  // namespace

Matrix haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw ValidationError("haar_unitary: dimension must be >= 1", "dim");
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= a > 0.0 ? d / a : cplx(1.0);
  }
  return q;
}

Matrix random_density(int dim, Rng& rng, int rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  const Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Vector random_pure(int dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_hermitian(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

// ---------------------------------------------------------------------------
// Signature-aware layer

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.mat(), b.mat()), a.sig().concat(b.sig()),
                         std::max(a.tol(), b.tol()),
                         a.subnormalized() || b.subnormalized());
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
  auto positions = rho.sig().indices_of(keep);
  std::sort(positions.begin(), positions.end());
  return DensityOperator(partial_trace(rho.mat(), rho.sig().dims(), positions),
                         rho.sig().select(positions), rho.tol(),
                         rho.subnormalized());
}

DensityOperator permute(const DensityOperator& rho,
                        const std::vector<std::string>& order) {
  const auto positions = rho.sig().indices_of(order);
  return DensityOperator(permute_systems(rho.mat(), rho.sig().dims(), positions),
                         rho.sig().select(positions), rho.tol(),
                         rho.subnormalized());
}

namespace {
void check_same_dims(const DensityOperator& a, const DensityOperator& b,
                     const char* what) {
  if (a.sig().dims() != b.sig().dims()) {
    throw DimensionError(std::string(what) + ": dimension mismatch");
  }
}
}  // namespace

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  check_same_dims(rho, sigma, "trace_distance");
  return trace_distance(rho.mat(), sigma.mat());
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  check_same_dims(rho, sigma, "fidelity");
  return std::min(fidelity(rho.mat(), sigma.mat()), 1.0);
}

double fidelity_star(const DensityOperator& rho, const DensityOperator& sigma) {
  check_same_dims(rho, sigma, "fidelity_star");
  return fidelity_star(rho.mat(), sigma.mat());
}

double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma) {
  check_same_dims(rho, sigma, "purified_distance");
  return purified_distance(rho.mat(), sigma.mat());
}

Vector canonical_purification_vector(const Matrix& rho) {
  check_square(rho, "canonical_purification");
  const Eigen::Index d = rho.rows();
  const Matrix sr = sqrt_psd(rho);
  Vector v(d * d);
  // (1 (x) sqrt(rho)) sum_i |i>|i>  has coefficient sqrt(rho)(j, i) at |i>|j>
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = sr(j, i);
  }
  return v;
}

PureState canonical_purification(const DensityOperator& rho,
                                  std::string_view ref_suffix) {
  Vector v = canonical_purification_vector(rho.mat());
  const double nrm = v.norm();
  if (nrm <= 0.0) throw ValidationError("canonical_purification: zero state", "state");
  v /= nrm;
  return PureState(std::move(v), rho.sig().suffixed(ref_suffix).concat(rho.sig()));
}

DensityOperator transpose(const DensityOperator& rho) {
  return DensityOperator(rho.mat().transpose(), rho.sig(), rho.tol(),
                         rho.subnormalized());
}

}  // namespace softcover::qmat
