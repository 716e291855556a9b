#include "softcover/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softcover/errors.hpp"
#include "softcover/sdp.hpp"

namespace softcover::search {

namespace {

Eigen::VectorXd coords(const Matrix& h, const std::vector<Matrix>& basis) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c(static_cast<Eigen::Index>(k)) = (basis[k] * h).trace().real();
  }
  return c;
}

Matrix combine(const Matrix& center, const std::vector<Matrix>& dirs,
               const Eigen::VectorXd& s) {
  Matrix out = center;
  for (std::size_t k = 0; k < dirs.size(); ++k) out += s(static_cast<Eigen::Index>(k)) * dirs[k];
  return out;
}

bool is_psd(const Matrix& m) { return qmat::min_eigenvalue(m) >= 0.0; }

// Largest t in [0, tmax] with feasible(center + t*dir), assuming feasibility
// along the ray is an interval starting at 0.
double max_step(const Matrix& center, const Matrix& dir,
                const std::function<bool(const Matrix&)>& feasible, double tmax) {
  if (feasible(center + tmax * dir)) return tmax;
  double lo = 0.0, hi = tmax;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(center + mid * dir)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

AffineSection feasible_section(const Matrix& rho_b, const channels::Channel& n,
                               double tol) {
  const int din = n.in_dim();
  const int dout = n.out_dim();
  if (rho_b.rows() != dout) {
    throw DimensionError("target state has dimension " + std::to_string(rho_b.rows()) +
                         ", channel output is " + std::to_string(dout));
  }
  const auto in_basis = sdp::hermitian_basis(din);
  const auto out_basis = sdp::hermitian_basis(dout);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(out_basis.size()),
                    static_cast<Eigen::Index>(in_basis.size()));
  for (std::size_t k = 0; k < in_basis.size(); ++k) {
    m.col(static_cast<Eigen::Index>(k)) = coords(n.apply(in_basis[k]), out_basis);
  }
  const Eigen::VectorXd r = coords(rho_b, out_basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(smax, 1.0)) ++rank;

  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(m.cols());
  const Eigen::MatrixXd u = svd.matrixU();
  const Eigen::MatrixXd v = svd.matrixV();
  for (Eigen::Index k = 0; k < rank; ++k) t0 += v.col(k) * (u.col(k).dot(r) / sv(k));
  const double residual = (m * t0 - r).norm();
  if (residual > std::sqrt(tol)) {
    throw ValidationError("S(rho, N) is empty: target is outside the channel range "
                          "(residual " + std::to_string(residual) + ")",
                          "state");
  }

  AffineSection sec;
  Matrix sigma0 = Matrix::Zero(din, din);
  for (std::size_t k = 0; k < in_basis.size(); ++k) {
    sigma0 += t0(static_cast<Eigen::Index>(k)) * in_basis[k];
  }
  for (Eigen::Index k = rank; k < v.cols(); ++k) {
    Matrix dir = Matrix::Zero(din, din);
    for (std::size_t j = 0; j < in_basis.size(); ++j) {
      dir += v(static_cast<Eigen::Index>(j), k) * in_basis[j];
    }
    sec.directions.push_back(dir);
  }

  if (sec.directions.empty()) {
    sec.center = sigma0;
  } else {
    sdp::Model model;
    const int lam = model.add_scalar();
    const int blk = model.add_block(din);
    model.add_constant(blk, sigma0);
    model.add_term(blk, lam, [din](const Matrix& x) {
      return Matrix(-x(0, 0) * Matrix::Identity(din, din));
    });
    std::vector<int> ids;
    for (const auto& dir : sec.directions) {
      const int s = model.add_scalar();
      ids.push_back(s);
      model.add_term(blk, s, [dir](const Matrix& x) { return Matrix(x(0, 0) * dir); });
    }
    model.add_objective(lam, -Matrix::Ones(1, 1));
    sdp::Options o;
    o.gap_tol = 1e-9;
    o.feas_tol = 1e-9;
    const auto sol = model.minimize(o);
    if (sol.status == sdp::Status::infeasible || sol.status == sdp::Status::unbounded) {
      throw SolverError(std::string("feasible_section: center program ") +
                        sdp::to_string(sol.status));
    }
    Eigen::VectorXd s(static_cast<Eigen::Index>(ids.size()));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      s(static_cast<Eigen::Index>(k)) = sol.var(ids[k])(0, 0).real();
    }
    sec.center = combine(sigma0, sec.directions, s);
  }
  sec.center = 0.5 * (sec.center + sec.center.adjoint());
  sec.margin = qmat::min_eigenvalue(sec.center);
  if (sec.margin < -tol) {
    throw ValidationError("S(rho, N) is empty: no positive semidefinite preimage "
                          "(smallest eigenvalue " + std::to_string(sec.margin) + ")",
                          "state");
  }
  if (sec.margin < 0.0) {
    // clip rounding noise
    const auto ed = qmat::eigh(sec.center);
    RealVector l = ed.values.cwiseMax(0.0);
    sec.center = ed.vectors * l.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
    sec.center /= sec.center.trace().real();
    sec.margin = 0.0;
  }
  return sec;
}

std::pair<Matrix, double> closest_input(const Matrix& rho_b, const channels::Channel& n) {
  const int din = n.in_dim();
  const int dout = n.out_dim();
  if (rho_b.rows() != dout) throw DimensionError("closest_input: target dimension mismatch");
  sdp::Model m;
  const int s = m.add_hermitian(din, 1.0);
  const int p = m.add_hermitian(dout);
  const int bs = m.add_block(din);
  m.add_term(bs, s, [](const Matrix& x) { return x; });
  const int bp = m.add_block(dout);
  m.add_term(bp, p, [](const Matrix& x) { return x; });
  const int bd = m.add_block(dout);
  m.add_term(bd, p, [](const Matrix& x) { return x; });
  m.add_term(bd, s, [n](const Matrix& x) { return Matrix(-n.apply(x)); });
  m.add_constant(bd, rho_b);
  m.add_objective(p, Matrix::Identity(dout, dout));
  sdp::Options o;
  o.gap_tol = 1e-10;
  o.feas_tol = 1e-10;
  const auto sol = m.minimize(o);
  Matrix sigma = 0.5 * (sol.var(s) + sol.var(s).adjoint());
  const auto ed = qmat::eigh(sigma);
  RealVector l = ed.values.cwiseMax(0.0);
  sigma = ed.vectors * l.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
  sigma /= sigma.trace().real();
  return {sigma, qmat::trace_distance(n.apply(sigma), rho_b)};
}

Result coordinate_descent(const Matrix& center, const std::vector<Matrix>& directions,
                          const std::function<bool(const Matrix&)>& feasible,
                          const Objective& f, const Options& opt, Rng& rng) {
  Result best;
  best.argmin = center;
  best.value = f(center);
  best.evaluations = 1;
  best.starts = 1;
  const auto k = static_cast<Eigen::Index>(directions.size());
  if (k == 0) {
    best.exact = true;
    return best;
  }
  // normalized directions keep the step scale comparable across axes
  std::vector<Matrix> dirs;
  for (const auto& d : directions) dirs.push_back(d / d.norm());

  for (int start = 0; start < std::max(opt.starts, 1); ++start) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(start));
    Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
    if (start > 0) {
      Eigen::VectorXd u(k);
      for (Eigen::Index j = 0; j < k; ++j) u(j) = sub.normal();
      u.normalize();
      const Matrix dir = combine(Matrix::Zero(center.rows(), center.cols()), dirs, u);
      const double tmax = max_step(center, dir, feasible, 4.0);
      s = u * (tmax * sub.uniform());
    }
    Matrix x = combine(center, dirs, s);
    double fx = f(x);
    ++best.evaluations;
    double h = 0.25;
    for (int sweep = 0; sweep < opt.max_sweeps && h >= opt.tol; ++sweep) {
      bool improved = false;
      for (Eigen::Index j = 0; j < k; ++j) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd t = s;
          t(j) += sign * h;
          const Matrix y = combine(center, dirs, t);
          if (!feasible(y)) continue;
          const double fy = f(y);
          ++best.evaluations;
          if (fy < fx - 1e-12) {
            s = t;
            x = y;
            fx = fy;
            improved = true;
            break;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    if (fx < best.value) {
      best.value = fx;
      best.argmin = x;
    }
    best.starts = start + 1;
  }
  return best;
}

Result minimize_over_section(const AffineSection& section, const Objective& f,
                             const Options& opt, Rng& rng) {
  return coordinate_descent(section.center, section.directions, is_psd, f, opt, rng);
}

Result minimize_over_ball(const Matrix& rho_b, const channels::Channel& n, double eps,
                          const Objective& f, const Options& opt, Rng& rng) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in [0, 1)", "epsilon");
  const auto [closest, dist] = closest_input(rho_b, n);
  if (dist > eps + 1e-9) {
    throw ValidationError("S_eps(rho, N) is empty: closest output is at distance " +
                              std::to_string(dist),
                          "epsilon");
  }
  const int din = n.in_dim();
  auto feasible = [&](const Matrix& s) {
    return is_psd(s) && qmat::trace_distance(n.apply(s), rho_b) <= eps;
  };
  // move the center toward the maximally mixed state while staying feasible
  const Matrix mixed = Matrix::Identity(din, din) / static_cast<double>(din);
  Matrix center = closest;
  if (feasible(center)) {
    const double t = max_step(closest, mixed - closest, feasible, 1.0);
    center = closest + 0.5 * t * (mixed - closest);
  }
  const auto dirs = sdp::hermitian_basis(din, true);
  auto res = coordinate_descent(center, dirs, feasible, f, opt, rng);
  res.exact = false;
  return res;
}

}  // namespace softcover::search
