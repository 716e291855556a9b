#include "softcover/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "softcover/normal.hpp"

namespace softcover::entropies {

namespace {

constexpr double kStateTol = 1e-8;

void check_bipartite(const Matrix& rho, int da, int db, const char* what) {
  if (da < 1 || db < 1 || rho.rows() != da * db || rho.cols() != da * db) {
    throw DimensionError(std::string(what) + ": state dimension " +
                         std::to_string(rho.rows()) + " does not match " +
                         std::to_string(da) + "x" + std::to_string(db));
  }
  if (!qmat::is_finite(rho)) throw ValidationError(std::string(what) + ": non-finite state", "state");
  if (qmat::hermiticity_defect(rho) > kStateTol) {
    throw ValidationError(std::string(what) + ": state is not Hermitian", "state");
  }
  if (qmat::min_eigenvalue(rho) < -kStateTol) {
    throw ValidationError(std::string(what) + ": state has a negative eigenvalue", "state");
  }
  const double tr = rho.trace().real();
  if (tr > 1.0 + kStateTol || tr <= 0.0) {
    throw ValidationError(std::string(what) + ": state trace must lie in (0, 1]", "state");
  }
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)", "epsilon");
}

// Every entropy here is k log2 |objective| with k <= 2, so the gap in bits is
// at most 2 |log2(primal / dual)|.
double bits_gap(const sdp::Solution& sol) {
  const double p = std::abs(sol.value);
  const double d = std::abs(sol.dual_value);
  if (!(p > 0.0 && d > 0.0)) return sol.gap();
  return 2.0 * std::abs(std::log2(p / d));
}

sdp::Solution solve_checked(const sdp::Model& m, double accuracy, const char* what) {
  sdp::Options opt;
  opt.gap_tol = 0.5 * accuracy;
  opt.feas_tol = accuracy;
  auto sol = m.minimize(opt);
  while (sol.ok() && bits_gap(sol) > accuracy && opt.gap_tol > 1e-14) {
    opt.gap_tol /= 8.0;
    auto tighter = m.minimize(opt);
    if (!tighter.ok()) break;
    sol = std::move(tighter);
  }
  if (sol.ok()) return sol;
  // accept a slightly looser stop when progress stalled near the optimum
  const double rel = sol.gap() / (1.0 + std::abs(sol.value) + std::abs(sol.dual_value));
  if ((sol.status == sdp::Status::max_iter || sol.status == sdp::Status::numerical) &&
      rel < 1e3 * accuracy && sol.primal_infeasibility < 1e3 * accuracy &&
      sol.dual_infeasibility < 1e3 * accuracy) {
    return sol;
  }
  std::ostringstream msg;
  msg << what << ": SDP solver stopped with status " << sdp::to_string(sol.status)
      << " (gap " << sol.gap() << ", infeasibility " << sol.primal_infeasibility << "/"
      << sol.dual_infeasibility << ")";
  throw SolverError(msg.str());
}

double safe_log2(double x) {
  return x > 0.0 ? std::log2(x) : -std::numeric_limits<double>::infinity();
}

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

struct SupportDecomposition {
  Matrix v;        // d x k isometry
  Matrix d;        // k x k diagonal
};

SupportDecomposition support_of(const Matrix& rho) {
  const auto ed = qmat::eigh(herm(rho), 1e-8);
  const double lmax = std::max(ed.values(0), 0.0);
  Eigen::Index k = 0;
  while (k < ed.values.size() && ed.values(k) > qmat::kSupportCutoff * lmax &&
         ed.values(k) > 0.0) {
    ++k;
  }
  if (k == 0) throw ValidationError("state is zero", "state");
  SupportDecomposition s;
  s.v = ed.vectors.leftCols(k);
  s.d = ed.values.head(k).cast<cplx>().asDiagonal();
  return s;
}

// rho (+) (1 - Tr rho): the extension that turns the generalized fidelity
// into the ordinary one.
Matrix extend_subnormalized(const Matrix& rho) {
  const auto d = rho.rows();
  Matrix out = Matrix::Zero(d + 1, d + 1);
  out.topLeftCorner(d, d) = rho;
  out(d, d) = std::max(0.0, 1.0 - rho.trace().real());
  return out;
}

// Adds "rho~ is within purified distance eps of rho" for a Hermitian model
// variable living in the first `dim` rows after `embed`.
void add_fidelity_ball(sdp::Model& m, int var, const Matrix& rho, double eps,
                       const sdp::LinearMap& embed) {
  const int d = static_cast<int>(rho.rows());
  const Matrix hat = extend_subnormalized(rho);
  const auto sup = support_of(hat);
  const int k = static_cast<int>(sup.v.cols());
  const int dim = d + 1 + k;
  const int y = m.add_complex(d + 1, k);
  const int blk = m.add_block(dim);
  Matrix c = Matrix::Zero(dim, dim);
  c(d, d) = 1.0;
  c.bottomRightCorner(k, k) = sup.d;
  m.add_constant(blk, c);
  m.add_term(blk, var, [embed, d, dim](const Matrix& x) {
    const Matrix full = embed(x);
    Matrix out = Matrix::Zero(dim, dim);
    out.topLeftCorner(d, d) = full;
    out(d, d) = -full.trace();
    return out;
  });
  m.add_term(blk, y, [d, k, dim](const Matrix& x) {
    Matrix out = Matrix::Zero(dim, dim);
    out.block(0, d + 1, d + 1, k) = x;
    out.block(d + 1, 0, k, d + 1) = x.adjoint();
    return out;
  });
  const int lin = m.add_block(1, true);
  Matrix c1(1, 1);
  c1(0, 0) = -std::sqrt(1.0 - eps * eps);
  m.add_constant(lin, c1);
  const Matrix v = sup.v;
  m.add_term(lin, y, [v](const Matrix& x) {
    Matrix out(1, 1);
    out(0, 0) = (v.adjoint() * x).trace().real();
    return out;
  });
}

EntropyReport min_entropy_report(const sdp::Solution& sol, int sigma_var) {
  EntropyReport r;
  r.value = -safe_log2(sol.value);
  r.lower = r.value;
  r.upper = sol.dual_value > 0.0 ? -safe_log2(sol.dual_value)
                                 : std::numeric_limits<double>::infinity();
  r.upper = std::max(r.upper, r.lower);
  r.duality_gap = r.upper - r.lower;
  r.iterations = sol.iterations;
  Matrix s = herm(sol.var(sigma_var));
  const double tr = s.trace().real();
  if (tr > 0.0) r.sigma = s / tr;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spectral quantities

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy: p outside [0, 1]", "p");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double von_neumann(const Matrix& rho) {
  const auto ed = qmat::eigh(rho, 1e-8);
  const double thr = kEntropyCutoff * std::max(ed.values(0), 0.0);
  double s = 0.0;
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    const double l = ed.values(k);
    if (l > thr && l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann(const qmat::DensityOperator& rho) { return von_neumann(rho.mat()); }

double conditional_entropy(const Matrix& rho_ab, int da, int db) {
  if (rho_ab.rows() != da * db) throw DimensionError("conditional_entropy: dimension mismatch");
  return von_neumann(rho_ab) - von_neumann(qmat::partial_trace(rho_ab, {da, db}, {1}));
}

double mutual_information(const Matrix& rho_ab, int da, int db) {
  if (rho_ab.rows() != da * db) throw DimensionError("mutual_information: dimension mismatch");
  return von_neumann(qmat::partial_trace(rho_ab, {da, db}, {0})) +
         von_neumann(qmat::partial_trace(rho_ab, {da, db}, {1})) - von_neumann(rho_ab);
}

std::pair<std::vector<std::string>, std::vector<std::string>> parse_split(
    const std::string& split) {
  const auto bar = split.find('|');
  if (bar == std::string::npos || split.find('|', bar + 1) != std::string::npos) {
    throw ValidationError("split must look like 'A|B'", "split");
  }
  auto parse_side = [](const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  };
  auto left = parse_side(split.substr(0, bar));
  auto right = parse_side(split.substr(bar + 1));
  if (left.empty()) throw ValidationError("split has no systems left of '|'", "split");
  return {left, right};
}

Matrix bipartite_marginal(const qmat::DensityOperator& rho, const std::string& split,
                          int* da, int* db) {
  auto [left, right] = parse_split(split);
  std::vector<std::string> all = left;
  all.insert(all.end(), right.begin(), right.end());
  const auto marg = qmat::permute(qmat::partial_trace(rho, all), all);
  *da = 1;
  for (const auto& l : left) *da *= rho.sig().dims()[rho.sig().index_of(l)];
  *db = marg.dim() / *da;
  return marg.mat();
}

double conditional_entropy(const qmat::DensityOperator& rho, const std::string& split) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return conditional_entropy(m, da, db);
}

double mutual_information(const qmat::DensityOperator& rho, const std::string& split) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return mutual_information(m, da, db);
}

Matrix channel_output_with_reference(const Matrix& sigma, const channels::Channel& n) {
  if (sigma.rows() != n.in_dim()) {
    throw DimensionError("channel input state has dimension " + std::to_string(sigma.rows()) +
                         ", channel expects " + std::to_string(n.in_dim()));
  }
  const Vector psi = qmat::canonical_purification_vector(sigma);
  const Matrix phi = psi * psi.adjoint();
  return n.apply_on(phi, {n.in_dim(), n.in_dim()}, 1);
}

double coherent_information(const Matrix& sigma, const channels::Channel& n) {
  const Matrix omega = channel_output_with_reference(sigma, n);
  return -conditional_entropy(omega, n.in_dim(), n.out_dim());
}

double holevo_information(const channels::Ensemble& e) {
  e.validate();
  double s = von_neumann(e.average());
  for (std::size_t x = 0; x < e.probs.size(); ++x) {
    if (e.probs[x] > 0.0) s -= e.probs[x] * von_neumann(e.states[x]);
  }
  return s;
}

namespace {
Matrix log_difference(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw DimensionError("relative entropy: dimension mismatch");
  const Matrix ps = qmat::support_projector(sigma, kEntropyCutoff);
  const Matrix q = Matrix::Identity(ps.rows(), ps.cols()) - ps;
  const double leak = (q * rho).trace().real();
  if (leak > 1e-9) {
    throw SupportError("supp rho is not contained in supp sigma (leak " + std::to_string(leak) + ")");
  }
  return qmat::log2_psd(rho, kEntropyCutoff) - qmat::log2_psd(sigma, kEntropyCutoff);
}
}  // namespace

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const Matrix l = log_difference(rho, sigma);
  return (rho * l).trace().real();
}

double info_variance(const Matrix& rho, const Matrix& sigma) {
  const Matrix l = log_difference(rho, sigma);
  const double d = (rho * l).trace().real();
  const double v = (rho * l * l).trace().real() - d * d;
  return qmat::clamp_nonneg(v);
}

double channel_info_variance(const Matrix& sigma, const channels::Channel& n) {
  const Matrix omega = channel_output_with_reference(sigma, n);
  const int dr = n.in_dim();
  const Matrix ob = qmat::partial_trace(omega, {dr, n.out_dim()}, {1});
  return info_variance(omega, qmat::kron(Matrix::Identity(dr, dr), ob));
}

// ---------------------------------------------------------------------------
// One-shot entropies

EntropyReport h_min(const Matrix& rho_ab, int da, int db, double accuracy) {
  check_bipartite(rho_ab, da, db, "h_min");
  sdp::Model m;
  const int s = m.add_hermitian(db);
  const int b = m.add_block(da * db);
  m.add_term(b, s, [da](const Matrix& x) {
    return qmat::kron(Matrix::Identity(da, da), x);
  });
  m.add_constant(b, -herm(rho_ab));
  m.add_objective(s, Matrix::Identity(db, db));
  const auto sol = solve_checked(m, accuracy, "h_min");
  return min_entropy_report(sol, s);
}

EntropyReport h_max(const Matrix& rho_ab, int da, int db, double accuracy) {
  check_bipartite(rho_ab, da, db, "h_max");
  const int d = da * db;
  const auto sup = support_of(rho_ab);
  const int k = static_cast<int>(sup.v.cols());
  const int dim = k + d;
  sdp::Model m;
  const int s = m.add_hermitian(db);
  const int y = m.add_complex(k, d);
  const int blk = m.add_block(dim);
  Matrix c = Matrix::Zero(dim, dim);
  c.topLeftCorner(k, k) = sup.d;
  m.add_constant(blk, c);
  m.add_term(blk, y, [k, d, dim](const Matrix& x) {
    Matrix out = Matrix::Zero(dim, dim);
    out.block(0, k, k, d) = x;
    out.block(k, 0, d, k) = x.adjoint();
    return out;
  });
  m.add_term(blk, s, [k, da, dim](const Matrix& x) {
    Matrix out = Matrix::Zero(dim, dim);
    const Matrix big = qmat::kron(Matrix::Identity(da, da), x);
    out.bottomRightCorner(big.rows(), big.cols()) = big;
    return out;
  });
  const int tr = m.add_block(1, true);
  m.add_constant(tr, Matrix::Ones(1, 1));
  m.add_term(tr, s, [](const Matrix& x) {
    Matrix out(1, 1);
    out(0, 0) = -x.trace().real();
    return out;
  });
  m.add_objective(y, -sup.v.adjoint());
  const auto sol = solve_checked(m, accuracy, "h_max");
  EntropyReport r;
  const double root_lo = -sol.value;
  const double root_hi = std::max(-sol.dual_value, root_lo);
  r.value = 2.0 * safe_log2(root_lo);
  r.lower = r.value;
  r.upper = 2.0 * safe_log2(root_hi);
  r.duality_gap = r.upper - r.lower;
  r.iterations = sol.iterations;
  Matrix sig = herm(sol.var(s));
  const double t = sig.trace().real();
  if (t > 0.0) r.sigma = sig / t;
  return r;
}

EntropyReport h_min_smooth(const Matrix& rho_ab, int da, int db, double eps,
                           double accuracy) {
  check_bipartite(rho_ab, da, db, "h_min_smooth");
  check_eps(eps);
  const int d = da * db;
  if (d > kMaxSmoothDim) {
    throw ResourceLimitError("h_min_smooth: exact smoothing is limited to dimension " +
                                 std::to_string(kMaxSmoothDim) + ", state has " +
                                 std::to_string(d),
                             d);
  }
  sdp::Model m;
  const int rt = m.add_hermitian(d);
  const int s = m.add_hermitian(db);
  const int dom = m.add_block(d);
  m.add_term(dom, s, [da](const Matrix& x) {
    return qmat::kron(Matrix::Identity(da, da), x);
  });
  m.add_term(dom, rt, [](const Matrix& x) { return Matrix(-x); });
  add_fidelity_ball(m, rt, herm(rho_ab), eps, [](const Matrix& x) { return x; });
  m.add_objective(s, Matrix::Identity(db, db));
  const auto sol = solve_checked(m, accuracy, "h_min_smooth");
  auto r = min_entropy_report(sol, s);
  r.witness = herm(sol.var(rt));
  return r;
}

Vector purify(const Matrix& rho, int* dc) {
  const auto sup = support_of(rho);
  const int k = static_cast<int>(sup.v.cols());
  const int d = static_cast<int>(rho.rows());
  Vector psi = Vector::Zero(d * k);
  for (int j = 0; j < k; ++j) {
    const double l = sup.d(j, j).real();
    for (int i = 0; i < d; ++i) psi(i * k + j) = std::sqrt(l) * sup.v(i, j);
  }
  *dc = k;
  return psi;
}

EntropyReport h_max_smooth(const Matrix& rho_ab, int da, int db, double eps,
                           double accuracy) {
  check_bipartite(rho_ab, da, db, "h_max_smooth");
  check_eps(eps);
  int dc = 0;
  const Vector psi = purify(herm(rho_ab), &dc);
  const Matrix rho_ac = qmat::partial_trace(psi * psi.adjoint(), {da, db, dc}, {0, 2});
  const auto dual = h_min_smooth(rho_ac, da, dc, eps, accuracy);
  EntropyReport r;
  r.value = -dual.value;
  r.lower = -dual.upper;
  r.upper = -dual.lower;
  r.duality_gap = dual.duality_gap;
  r.iterations = dual.iterations;
  r.method = "duality";
  r.witness = dual.witness;
  return r;
}

EntropyReport h_min_smooth_lower_bound(const Matrix& rho_ab, int da, int db,
                                       double eps, double accuracy) {
  check_bipartite(rho_ab, da, db, "h_min_smooth_lower_bound");
  check_eps(eps);
  const Matrix rho = herm(rho_ab);
  const auto plain = h_min(rho, da, db, accuracy);

  std::vector<Matrix> candidates;
  if (plain.sigma) candidates.push_back(*plain.sigma);
  candidates.push_back(qmat::partial_trace(rho, {da, db}, {1}));

  EntropyReport best = plain;
  best.method = "clip-lower-bound";
  best.witness = rho;
  for (const auto& sigma : candidates) {
    const Matrix big = qmat::kron(Matrix::Identity(da, da), herm(sigma));
    const Matrix s_half = qmat::sqrt_psd(big);
    const Matrix s_ihalf = qmat::inv_sqrt_psd(big);
    const auto ed = qmat::eigh(herm(s_ihalf * rho * s_ihalf), 1e-8);
    auto clipped = [&](double level) {
      RealVector v = ed.values.cwiseMin(level).cwiseMax(0.0);
      const Matrix g = ed.vectors * v.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
      return Matrix(herm(s_half * g * s_half));
    };
    double lo = 0.0, hi = std::max(ed.values(0), 0.0);
    if (qmat::purified_distance(clipped(hi), rho) > eps) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (qmat::purified_distance(clipped(mid), rho) <= eps) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const Matrix tilde = clipped(hi);
    if (tilde.trace().real() <= 0.0) continue;
    const double closed = -safe_log2(hi * sigma.trace().real());
    const auto exact = h_min(tilde, da, db, accuracy);
    const double bound = std::max(closed, exact.lower);
    if (bound > best.value) {
      best.value = bound;
      best.lower = bound;
      best.upper = std::numeric_limits<double>::infinity();
      best.iterations = exact.iterations;
      best.witness = tilde;
      best.sigma = exact.sigma;
    }
  }
  best.upper = std::numeric_limits<double>::infinity();
  best.duality_gap = std::numeric_limits<double>::infinity();
  return best;
}

EntropyReport h_min(const qmat::DensityOperator& rho, const std::string& split,
                    double accuracy) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return h_min(m, da, db, accuracy);
}

EntropyReport h_max(const qmat::DensityOperator& rho, const std::string& split,
                    double accuracy) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return h_max(m, da, db, accuracy);
}

EntropyReport h_min_smooth(const qmat::DensityOperator& rho, const std::string& split,
                           double eps, double accuracy) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return h_min_smooth(m, da, db, eps, accuracy);
}

EntropyReport h_max_smooth(const qmat::DensityOperator& rho, const std::string& split,
                           double eps, double accuracy) {
  int da = 0, db = 0;
  const Matrix m = bipartite_marginal(rho, split, &da, &db);
  return h_max_smooth(m, da, db, eps, accuracy);
}

// ---------------------------------------------------------------------------
// Max-relative entropy

EntropyReport d_max(const Matrix& rho, const Matrix& omega) {
  if (rho.rows() != omega.rows()) throw DimensionError("d_max: dimension mismatch");
  const Matrix p = qmat::support_projector(omega);
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  const double leak = (q * rho).trace().real();
  if (leak > 1e-9) {
    throw SupportError("d_max: supp rho is not contained in supp omega (leak " +
                       std::to_string(leak) + ")");
  }
  const Matrix w = qmat::inv_sqrt_psd(omega);
  EntropyReport r;
  r.value = safe_log2(qmat::max_eigenvalue(herm(w * rho * w)));
  r.lower = r.upper = r.value;
  r.method = "closed-form";
  return r;
}

EntropyReport d_max_smooth(const Matrix& rho, const Matrix& omega, double eps,
                           double accuracy) {
  check_bipartite(rho, static_cast<int>(rho.rows()), 1, "d_max_smooth");
  check_eps(eps);
  if (omega.rows() != rho.rows()) throw DimensionError("d_max_smooth: dimension mismatch");
  const int d = static_cast<int>(rho.rows());
  if (d > kMaxSmoothDim) {
    throw ResourceLimitError("d_max_smooth: exact smoothing is limited to dimension " +
                                 std::to_string(kMaxSmoothDim),
                             d);
  }
  const Matrix u = qmat::support_basis(herm(omega));
  const int r = static_cast<int>(u.cols());
  const Matrix om_r = herm(u.adjoint() * omega * u);
  // feasibility: the closest state inside supp omega
  const Matrix pr = u * u.adjoint();
  const Matrix inside = pr * rho * pr;
  if (qmat::purified_distance(inside, rho) > eps + 1e-12 &&
      qmat::fidelity(inside, rho) < 1e-14) {
    throw SupportError("d_max_smooth: no state in the smoothing ball lies in supp omega");
  }
  sdp::Model m;
  const int rt = m.add_hermitian(r);
  const int t = m.add_scalar();
  const int dom = m.add_block(r);
  m.add_term(dom, t, [om_r](const Matrix& x) { return Matrix(x(0, 0) * om_r); });
  m.add_term(dom, rt, [](const Matrix& x) { return Matrix(-x); });
  add_fidelity_ball(m, rt, herm(rho), eps, [u](const Matrix& x) {
    return Matrix(u * x * u.adjoint());
  });
  m.add_objective(t, Matrix::Ones(1, 1));
  sdp::Solution sol;
  try {
    sol = solve_checked(m, accuracy, "d_max_smooth");
  } catch (const SolverError& e) {
    throw SupportError(std::string("d_max_smooth: ") + e.what());
  }
  EntropyReport rep;
  rep.value = safe_log2(sol.value);
  rep.upper = rep.value;
  rep.lower = std::min(rep.value, safe_log2(std::max(sol.dual_value, 0.0)));
  rep.duality_gap = rep.upper - rep.lower;
  rep.iterations = sol.iterations;
  rep.witness = Matrix(u * herm(sol.var(rt)) * u.adjoint());
  return rep;
}

FixedSigmaReport h_min_smooth_fixed_sigma(const Matrix& rho_ab, int da, int db,
                                          const Matrix& sigma_b, double eps,
                                          double accuracy) {
  check_bipartite(rho_ab, da, db, "h_min_smooth_fixed_sigma");
  check_eps(eps);
  if (sigma_b.rows() != db) throw DimensionError("fixed sigma has wrong dimension");
  if (qmat::min_eigenvalue(sigma_b) <= 0.0) {
    throw ValidationError("fixed sigma must have full support", "sigma");
  }
  int dc = 0;
  const Vector psi = purify(herm(rho_ab), &dc);
  const int d = da * db;
  const int n = d * dc;
  if (n > 4 * kMaxSmoothDim) {
    throw ResourceLimitError("h_min_smooth_fixed_sigma: purification too large", n);
  }
  const Matrix proj = psi * psi.adjoint();
  const Matrix big_sigma = qmat::kron(Matrix::Identity(da, da), herm(sigma_b));

  sdp::Model m;
  const int rt = m.add_hermitian(n);
  const int t = m.add_scalar();
  const int pos = m.add_block(n);
  m.add_term(pos, rt, [](const Matrix& x) { return x; });
  const int dom = m.add_block(d);
  m.add_term(dom, t, [big_sigma](const Matrix& x) { return Matrix(x(0, 0) * big_sigma); });
  m.add_term(dom, rt, [d, dc](const Matrix& x) {
    return Matrix(-qmat::partial_trace(x, {d, dc}, {0}));
  });
  const int overlap = m.add_block(1, true);
  m.add_constant(overlap, Matrix::Constant(1, 1, -(1.0 - eps * eps)));
  m.add_term(overlap, rt, [proj](const Matrix& x) {
    return Matrix::Constant(1, 1, (proj * x).trace().real());
  });
  const int norm = m.add_block(1, true);
  m.add_constant(norm, Matrix::Ones(1, 1));
  m.add_term(norm, rt, [](const Matrix& x) {
    return Matrix::Constant(1, 1, -x.trace().real());
  });
  m.add_objective(t, Matrix::Ones(1, 1));
  const auto sol = solve_checked(m, accuracy, "h_min_smooth_fixed_sigma");

  FixedSigmaReport out;
  out.report.value = -safe_log2(sol.value);
  out.report.lower = out.report.value;
  out.report.upper = std::max(out.report.value, -safe_log2(sol.dual_value));
  out.report.duality_gap = out.report.upper - out.report.lower;
  out.report.iterations = sol.iterations;
  out.report.witness = herm(qmat::partial_trace(sol.var(rt), {d, dc}, {0}));
  out.report.sigma = sigma_b;
  out.dual_e = herm(sol.duals[dom]);
  out.dual_lambda = sol.duals[overlap](0, 0).real();
  out.dual_mu = sol.duals[norm](0, 0).real();
  return out;
}

double aep_second_order_rhs(const Matrix& rho, const Matrix& sigma, int n, double eps) {
  if (n < 1) throw ValidationError("n must be >= 1", "n");
  check_eps(eps);
  const double d = relative_entropy(rho, sigma);
  const double v = info_variance(rho, sigma);
  return n * d - std::sqrt(n * v) * normal_quantile(eps * eps);
}

}  // namespace softcover::entropies
