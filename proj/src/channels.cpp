#include "softcover/channels.hpp"

#include <algorithm>
#include <cmath>

namespace softcover::channels {

namespace {

constexpr double kTpTol = 1e-8;

int checked_dim(const std::vector<Matrix>& kraus, bool rows) {
  if (kraus.empty()) throw ValidationError("channel needs at least one Kraus operator", "kraus");
  const auto d = rows ? kraus.front().rows() : kraus.front().cols();
  for (const auto& k : kraus) {
    if ((rows ? k.rows() : k.cols()) != d) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
  }
  return static_cast<int>(d);
}

qmat::SystemSignature copy_labels(const qmat::SystemSignature& sig, int copy) {
  return sig.suffixed(std::to_string(copy + 1));
}

Matrix embed_identity(const Matrix& k, int left, int right) {
  Matrix out = k;
  if (left > 1) out = qmat::kron(Matrix::Identity(left, left), out);
  if (right > 1) out = qmat::kron(out, Matrix::Identity(right, right));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// StinespringIsometry / Ensemble

std::vector<Matrix> StinespringIsometry::kraus() const {
  const int dout = out_dim();
  const int denv = env_dim();
  std::vector<Matrix> out;
  out.reserve(denv);
  for (int e = 0; e < denv; ++e) {
    Matrix k(dout, in_dim());
    for (int o = 0; o < dout; ++o) k.row(o) = V.row(o * denv + e);
    out.push_back(std::move(k));
  }
  return out;
}

Matrix StinespringIsometry::apply(const Matrix& rho) const {
  const Matrix full = V * rho * V.adjoint();
  return qmat::partial_trace(full, {out_dim(), env_dim()}, {0});
}

double StinespringIsometry::isometry_defect() const {
  return (V.adjoint() * V - support).cwiseAbs().maxCoeff();
}

void Ensemble::validate(double tol) const {
  if (probs.empty() || probs.size() != states.size()) {
    throw ValidationError("ensemble needs one state per probability", "ensemble");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= -tol)) throw ValidationError("ensemble probability is negative", "probs");
    total += p;
  }
  if (std::abs(total - 1.0) > tol) {
    throw ValidationError("ensemble probabilities do not sum to 1", "probs");
  }
  const auto d = states.front().rows();
  for (const auto& s : states) {
    if (s.rows() != d) throw DimensionError("ensemble states differ in dimension");
    qmat::DensityOperator check(s, tol);
    (void)check;
  }
}

Matrix Ensemble::cq_state() const {
  const int nx = static_cast<int>(probs.size());
  const int d = static_cast<int>(states.front().rows());
  Matrix out = Matrix::Zero(nx * d, nx * d);
  for (int x = 0; x < nx; ++x) out.block(x * d, x * d, d, d) = probs[x] * states[x];
  return out;
}

Matrix Ensemble::average() const {
  Matrix out = Matrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t x = 0; x < probs.size(); ++x) out += probs[x] * states[x];
  return out;
}

// ---------------------------------------------------------------------------
// Channel

Channel::Channel(std::vector<Matrix> kraus, qmat::SystemSignature in_sig,
                 qmat::SystemSignature out_sig, std::string name, json params)
    : kraus_(std::move(kraus)),
      in_sig_(std::move(in_sig)),
      out_sig_(std::move(out_sig)),
      name_(std::move(name)),
      params_(std::move(params)) {
  const int dout = checked_dim(kraus_, true);
  const int din = checked_dim(kraus_, false);
  if (din != in_sig_.total() || dout != out_sig_.total()) {
    throw DimensionError("Kraus shape " + std::to_string(dout) + "x" +
                         std::to_string(din) +
                         " does not match channel signatures");
  }
  for (const auto& k : kraus_) {
    if (!qmat::is_finite(k)) throw ValidationError("non-finite Kraus entry", "kraus");
  }
  choi_ = std::make_shared<const Matrix>(choi_of(*this));
  stinespring_ = std::make_shared<const StinespringIsometry>(
      stinespring_of_kraus(kraus_, in_sig_, out_sig_));
}

Channel::Channel(std::vector<Matrix> kraus, std::string name, json params)
    : Channel(kraus,
              qmat::SystemSignature::single(checked_dim(kraus, false), "A"),
              qmat::SystemSignature::single(checked_dim(kraus, true), "B"),
              std::move(name), std::move(params)) {}

Channel Channel::from_choi(const Matrix& choi, qmat::SystemSignature in_sig,
                           qmat::SystemSignature out_sig, double tol) {
  auto kraus = kraus_of_choi(choi, in_sig.total(), out_sig.total(), tol);
  return Channel(std::move(kraus), std::move(in_sig), std::move(out_sig), "choi");
}

Matrix Channel::apply(const Matrix& rho) const {
  if (rho.rows() != in_dim() || rho.cols() != in_dim()) {
    throw DimensionError("channel '" + name_ + "' expects input dimension " +
                         std::to_string(in_dim()) + ", got " +
                         std::to_string(rho.rows()));
  }
  Matrix out = Matrix::Zero(out_dim(), out_dim());
  for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

qmat::DensityOperator Channel::apply(const qmat::DensityOperator& rho) const {
  if (rho.sig().dims() != in_sig_.dims()) {
    throw DimensionError("channel '" + name_ + "': input signature mismatch");
  }
  return qmat::DensityOperator(apply(rho.mat()), out_sig_,
                               std::max(rho.tol(), 1e-8), rho.subnormalized());
}

Matrix Channel::apply_adjoint(const Matrix& x) const {
  if (x.rows() != out_dim() || x.cols() != out_dim()) {
    throw DimensionError("channel '" + name_ + "': adjoint expects dimension " +
                         std::to_string(out_dim()));
  }
  Matrix out = Matrix::Zero(in_dim(), in_dim());
  for (const auto& k : kraus_) out.noalias() += k.adjoint() * x * k;
  return out;
}

Matrix Channel::apply_on(const Matrix& rho, const std::vector<int>& dims,
                         int position) const {
  if (position < 0 || position >= static_cast<int>(dims.size())) {
    throw DimensionError("apply_on: bad subsystem position");
  }
  if (dims[position] != in_dim()) {
    throw DimensionError("apply_on: subsystem dimension does not match channel input");
  }
  int left = 1, right = 1;
  for (int s = 0; s < position; ++s) left *= dims[s];
  for (int s = position + 1; s < static_cast<int>(dims.size()); ++s) right *= dims[s];
  if (rho.rows() != left * in_dim() * right) {
    throw DimensionError("apply_on: operator dimension does not match dims");
  }
  const int dn = left * out_dim() * right;
  Matrix out = Matrix::Zero(dn, dn);
  for (const auto& k : kraus_) {
    const Matrix big = embed_identity(k, left, right);
    out.noalias() += big * rho * big.adjoint();
  }
  return out;
}

json Channel::to_json() const {
  json kraus = json::array();
  for (const auto& k : kraus_) kraus.push_back(io::matrix_to_json(k));
  return {{"name", name_},
          {"params", params_},
          {"kraus", kraus},
          {"in_dims", in_sig_.dims()},
          {"out_dims", out_sig_.dims()},
          {"in_labels", in_sig_.labels()},
          {"out_labels", out_sig_.labels()}};
}

Channel Channel::from_json(const json& j) {
  if (!j.contains("kraus")) throw ValidationError("channel JSON needs kraus", "kraus");
  std::vector<Matrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(io::matrix_from_json(k));
  if (kraus.empty()) throw ValidationError("channel JSON has no Kraus operators", "kraus");
  auto make_sig = [&](const char* dims_key, const char* labels_key,
                      int fallback, const char* base) {
    if (!j.contains(dims_key)) return qmat::SystemSignature::single(fallback, base);
    auto dims = j.at(dims_key).get<std::vector<int>>();
    std::vector<std::string> labels;
    if (j.contains(labels_key)) {
      labels = j.at(labels_key).get<std::vector<std::string>>();
    } else {
      for (std::size_t k = 0; k < dims.size(); ++k) labels.push_back(base + std::to_string(k + 1));
      if (dims.size() == 1) labels = {base};
    }
    return qmat::SystemSignature(std::move(dims), std::move(labels));
  };
  auto in_sig = make_sig("in_dims", "in_labels", static_cast<int>(kraus.front().cols()), "A");
  auto out_sig = make_sig("out_dims", "out_labels", static_cast<int>(kraus.front().rows()), "B");
  Channel ch(std::move(kraus), std::move(in_sig), std::move(out_sig),
             j.value("name", std::string("custom")),
             j.value("params", json::object()));
  verify_cptp(ch);
  return ch;
}

// ---------------------------------------------------------------------------
// Verification and conversions

void verify_cptp(const Channel& n, double tol) {
  Matrix tp = Matrix::Zero(n.in_dim(), n.in_dim());
  for (const auto& k : n.kraus()) tp.noalias() += k.adjoint() * k;
  const double tp_defect =
      (tp - Matrix::Identity(n.in_dim(), n.in_dim())).cwiseAbs().maxCoeff();
  if (tp_defect > kTpTol) {
    throw ValidationError("channel '" + n.name() +
                              "' is not trace preserving (defect " +
                              std::to_string(tp_defect) + ")",
                          "kraus");
  }
  const double lmin = qmat::min_eigenvalue(n.choi());
  if (lmin < -tol) {
    throw ValidationError("channel '" + n.name() +
                              "' is not completely positive (Choi eigenvalue " +
                              std::to_string(lmin) + ")",
                          "kraus");
  }
}

bool is_cptp(const Channel& n, double tol) {
  try {
    verify_cptp(n, tol);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

Matrix choi_of(const Channel& n) {
  const int din = n.in_dim();
  const int dout = n.out_dim();
  Matrix j = Matrix::Zero(din * dout, din * dout);
  Vector v(din * dout);
  for (const auto& k : n.kraus()) {
    for (int i = 0; i < din; ++i) {
      for (int o = 0; o < dout; ++o) v(i * dout + o) = k(o, i);
    }
    j.noalias() += v * v.adjoint();
  }
  return j;
}

std::vector<Matrix> kraus_of_choi(const Matrix& choi, int din, int dout,
                                  double tol) {
  if (choi.rows() != din * dout || choi.cols() != din * dout) {
    throw DimensionError("kraus_of_choi: Choi matrix has wrong dimension");
  }
  const auto ed = qmat::eigh(choi, tol);
  if (ed.values.size() > 0 && ed.values(ed.values.size() - 1) < -tol) {
    throw ValidationError("kraus_of_choi: Choi matrix is not positive (eigenvalue " +
                              std::to_string(ed.values(ed.values.size() - 1)) + ")",
                          "choi");
  }
  const double lmax = std::max(ed.values.size() > 0 ? ed.values(0) : 0.0, 0.0);
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    const double lam = ed.values(k);
    if (lam <= qmat::kSupportCutoff * lmax || lam <= 0.0) break;
    Matrix kr(dout, din);
    const double s = std::sqrt(lam);
    for (int i = 0; i < din; ++i) {
      for (int o = 0; o < dout; ++o) kr(o, i) = s * ed.vectors(i * dout + o, k);
    }
    out.push_back(std::move(kr));
  }
  if (out.empty()) out.push_back(Matrix::Zero(dout, din));
  return out;
}

StinespringIsometry stinespring_of_kraus(const std::vector<Matrix>& kraus,
                                         const qmat::SystemSignature& in_sig,
                                         const qmat::SystemSignature& out_sig) {
  const int din = in_sig.total();
  const int dout = out_sig.total();
  const int nk = static_cast<int>(kraus.size());
  const int denv = std::max(nk, dout);
  StinespringIsometry s;
  s.V = Matrix::Zero(dout * denv, din);
  for (int e = 0; e < nk; ++e) {
    for (int o = 0; o < dout; ++o) s.V.row(o * denv + e) = kraus[e].row(o);
  }
  s.in_sig = in_sig;
  s.out_sig = out_sig;
  std::string env_label = "E";
  while (in_sig.has(env_label) || out_sig.has(env_label)) env_label += "'";
  s.env_sig = qmat::SystemSignature::single(denv, env_label);
  s.support = Matrix::Identity(din, din);
  return s;
}

Channel tensor(const Channel& a, const Channel& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) kraus.push_back(qmat::kron(ka, kb));
  }
  auto in_sig = a.in_sig().concat(b.in_sig());
  auto out_sig = a.out_sig().concat(b.out_sig());
  const long long dd = static_cast<long long>(in_sig.total()) * out_sig.total();
  if (static_cast<long long>(kraus.size()) > dd) {
    Channel tmp(std::move(kraus), in_sig, out_sig);
    kraus = kraus_of_choi(tmp.choi(), in_sig.total(), out_sig.total());
  }
  return Channel(std::move(kraus), std::move(in_sig), std::move(out_sig),
                 a.name() + "(x)" + b.name());
}

Channel tensor_power(const Channel& n, int copies) {
  if (copies < 1) throw ValidationError("tensor_power: n must be >= 1", "n");
  if (copies == 1) return n;
  Channel base(n.kraus(), copy_labels(n.in_sig(), 0), copy_labels(n.out_sig(), 0),
               n.name(), n.params());
  Channel acc = base;
  for (int c = 1; c < copies; ++c) {
    Channel next(n.kraus(), copy_labels(n.in_sig(), c), copy_labels(n.out_sig(), c),
                 n.name(), n.params());
    acc = tensor(acc, next);
  }
  json params = {{"base", n.params()}, {"copies", copies}};
  return Channel(acc.kraus(), acc.in_sig(), acc.out_sig(),
                 n.name() + "^" + std::to_string(copies), params);
}

Channel compose(const Channel& second, const Channel& first) {
  if (first.out_dim() != second.in_dim()) {
    throw DimensionError("compose: output of first does not match input of second");
  }
  std::vector<Matrix> kraus;
  for (const auto& k2 : second.kraus()) {
    for (const auto& k1 : first.kraus()) kraus.push_back(k2 * k1);
  }
  const long long dd = static_cast<long long>(first.in_dim()) * second.out_dim();
  if (static_cast<long long>(kraus.size()) > dd) {
    Channel tmp(std::move(kraus), first.in_sig(), second.out_sig());
    kraus = kraus_of_choi(tmp.choi(), first.in_dim(), second.out_dim());
  }
  return Channel(std::move(kraus), first.in_sig(), second.out_sig(),
                 second.name() + "o" + first.name());
}

Channel channel_of_isometry(const StinespringIsometry& v, const Vector& fallback) {
  if (fallback.size() != v.out_dim()) {
    throw DimensionError("channel_of_isometry: fallback state has wrong dimension");
  }
  auto kraus = v.kraus();
  const int din = v.in_dim();
  const Matrix off = Matrix::Identity(din, din) - v.support;
  // off is a projector: keep eigenvalues near one
  const auto ed = qmat::eigh(0.5 * (off + off.adjoint()), 1e-6);
  const Vector f = fallback / fallback.norm();
  for (Eigen::Index c = 0; c < ed.values.size() && ed.values(c) > 0.5; ++c) {
    kraus.push_back(f * ed.vectors.col(c).adjoint());
  }
  return Channel(std::move(kraus), v.in_sig, v.out_sig, "posterior");
}

// ---------------------------------------------------------------------------
// Posterior reference map / Petz recovery

StinespringIsometry posterior_reference_map(const Matrix& rho_b,
                                            const StinespringIsometry& v,
                                            double cutoff) {
  const int db = v.in_dim();
  const int da = v.out_dim();
  const int de = v.env_dim();
  if (rho_b.rows() != db || rho_b.cols() != db) {
    throw DimensionError("posterior_reference_map: source dimension mismatch");
  }
  qmat::DensityOperator check(rho_b, v.in_sig, 1e-8);
  (void)check;

  const Matrix rho_a = v.apply(rho_b);
  const auto ed = qmat::eigh(rho_a, 1e-8);
  const double lmax = std::max(ed.values(0), 0.0);

  // psi[iR, j] = sqrt(rho_b)(j, iR)
  const Matrix psi = qmat::sqrt_psd(rho_b).transpose();

  StinespringIsometry w;
  w.in_sig = v.out_sig.suffixed("_R");
  w.out_sig = v.in_sig.suffixed("_R");
  w.env_sig = v.env_sig;
  w.V = Matrix::Zero(db * de, da);
  w.support = Matrix::Zero(da, da);
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    const double lam = ed.values(k);
    if (lam <= cutoff * lmax || lam <= 0.0) break;
    const Vector a = ed.vectors.col(k);
    // X_a = (<a| (x) 1_E) V : B -> E
    Matrix xa = Matrix::Zero(de, db);
    for (int o = 0; o < da; ++o) {
      xa += std::conj(a(o)) * v.V.middleRows(o * de, de);
    }
    const Matrix col = psi * xa.transpose();  // [iR, e]
    Vector wa(db * de);
    for (int ir = 0; ir < db; ++ir) {
      for (int e = 0; e < de; ++e) wa(ir * de + e) = col(ir, e);
    }
    wa /= std::sqrt(lam);
    const Vector abar = a.conjugate();
    w.V.noalias() += wa * abar.adjoint();
    w.support.noalias() += abar * abar.adjoint();
  }
  return w;
}

Matrix petz_recovery_apply(const Matrix& rho_b, const Channel& n_v,
                           const Matrix& sigma_ar, double tol) {
  if (rho_b.rows() != n_v.in_dim() || sigma_ar.rows() != n_v.out_dim()) {
    throw DimensionError("petz_recovery_apply: dimension mismatch");
  }
  const Matrix rho_a = n_v.apply(rho_b);
  const Matrix sigma_a = sigma_ar.transpose();
  const Matrix p = qmat::support_projector(rho_a);
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  const double leak = (q * sigma_a * q).cwiseAbs().maxCoeff();
  if (leak > tol) {
    throw SupportError("petz_recovery_apply: sigma^A leaves the support of rho^A (" +
                       std::to_string(leak) + ")");
  }
  const Matrix ris = qmat::inv_sqrt_psd(rho_a);
  const Matrix inner = n_v.apply_adjoint(ris * sigma_a * ris);
  const Matrix srb = qmat::sqrt_psd(rho_b.transpose());
  return srb * inner.transpose() * srb;
}

// ---------------------------------------------------------------------------
// Random instances

StinespringIsometry random_isometry(int din, int dout, int denv, Rng& rng) {
  if (din > dout * denv) {
    throw DimensionError("random_isometry: input larger than output (x) env");
  }
  const Matrix u = qmat::haar_unitary(dout * denv, rng);
  StinespringIsometry s;
  s.V = u.leftCols(din);
  s.in_sig = qmat::SystemSignature::single(din, "B");
  s.out_sig = qmat::SystemSignature::single(dout, "A");
  s.env_sig = qmat::SystemSignature::single(denv, "E");
  s.support = Matrix::Identity(din, din);
  return s;
}

Channel random_channel(int din, int dout, int nkraus, Rng& rng) {
  const auto iso = random_isometry(din, dout, nkraus, rng);
  auto all = iso.kraus();
  return Channel(std::move(all), qmat::SystemSignature::single(din, "A"),
                 qmat::SystemSignature::single(dout, "B"), "random");
}

}  // namespace softcover::channels
