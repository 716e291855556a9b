#include "softcover/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace softcover::sdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iter: return "max_iter";
    case Status::numerical: return "numerical";
  }
  return "unknown";
}

namespace {

struct BlockUse {
  int var;
  const std::vector<Entry>* entries;
};

double sparse_inner(const std::vector<Entry>& a, const MatrixXd& m) {
  // tr(A M) = sum_pq A[p,q] M[q,p]
  double s = 0.0;
  for (const auto& e : a) s += e.value * m(e.col, e.row);
  return s;
}

double frobenius(const std::vector<Entry>& a) {
  double s = 0.0;
  for (const auto& e : a) s += e.value * e.value;
  return std::sqrt(s);
}

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha in (0, inf] with X + alpha dX >= 0, given X > 0.
double max_step(const MatrixXd& x, const MatrixXd& dx, bool* ok) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) {
    *ok = false;
    return 0.0;
  }
  const MatrixXd& l = llt.matrixL();
  MatrixXd t = l.triangularView<Eigen::Lower>().solve(dx);
  t = l.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

class Solver {
 public:
  Solver(const LmiProblem& p, const Options& o) : p_(p), o_(o) {
    nb_ = static_cast<int>(p_.block_sizes.size());
    m_ = p_.num_vars();
    uses_.resize(nb_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& sb : p_.A[i]) uses_[sb.block].push_back({i, &sb.entries});
    }
    n_total_ = 0;
    for (int s : p_.block_sizes) n_total_ += s;
  }

  LmiResult run() {
    LmiResult r;
    r.y = VectorXd::Zero(m_);
    initial_point(r);
    const double norm_a = p_.c.norm();
    double norm_c = 0.0;
    for (const auto& cb : p_.C) norm_c = std::max(norm_c, cb.norm());

    std::vector<MatrixXd> zinv(nb_), rd(nb_);
    for (int it = 0; it < o_.max_iter; ++it) {
      r.iterations = it;
      // residuals
      const auto aty = adjoint_apply(r.y);
      double rd_norm = 0.0;
      for (int b = 0; b < nb_; ++b) {
        rd[b] = p_.C[b] - aty[b] + r.Z[b];
        rd_norm = std::max(rd_norm, rd[b].norm());
      }
      VectorXd ax = apply(r.X);
      VectorXd rp = p_.c - ax;
      r.primal_value = p_.c.dot(r.y);
      r.dual_value = 0.0;
      double xz = 0.0;
      for (int b = 0; b < nb_; ++b) {
        r.dual_value += (p_.C[b].cwiseProduct(r.X[b])).sum();
        xz += (r.X[b].cwiseProduct(r.Z[b])).sum();
      }
      const double mu = xz / n_total_;
      r.primal_infeasibility = rd_norm / (1.0 + norm_c);
      r.dual_infeasibility = rp.norm() / (1.0 + norm_a);
      const double relgap = std::abs(r.primal_value - r.dual_value) /
                            (1.0 + std::abs(r.primal_value) + std::abs(r.dual_value));
      if (relgap < o_.gap_tol && r.primal_infeasibility < o_.feas_tol &&
          r.dual_infeasibility < o_.feas_tol) {
        r.status = Status::optimal;
        return r;
      }
      // divergence diagnostics
      double xnorm = 0.0, ynorm = r.y.cwiseAbs().maxCoeff();
      for (int b = 0; b < nb_; ++b) xnorm = std::max(xnorm, r.X[b].cwiseAbs().maxCoeff());
      if (xnorm > 1e12 && r.dual_infeasibility < 1e-6) {
        // dual rays: primal (y) problem infeasible
        r.status = Status::infeasible;
        return r;
      }
      if (ynorm > 1e12 && r.primal_infeasibility < 1e-6) {
        r.status = Status::unbounded;
        return r;
      }

      for (int b = 0; b < nb_; ++b) {
        Eigen::LLT<MatrixXd> llt(r.Z[b]);
        if (llt.info() != Eigen::Success) {
          r.status = Status::numerical;
          return r;
        }
        zinv[b] = llt.solve(MatrixXd::Identity(r.Z[b].rows(), r.Z[b].cols()));
        zinv[b] = sym(zinv[b]);
      }
      MatrixXd schur = build_schur(r.X, zinv);
      Eigen::LLT<MatrixXd> chol(schur);
      bool use_ldlt = chol.info() != Eigen::Success;
      Eigen::LDLT<MatrixXd> ldlt;
      if (use_ldlt) {
        const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
        schur.diagonal().array() += reg;
        ldlt.compute(schur);
        if (ldlt.info() != Eigen::Success) {
          r.status = Status::numerical;
          return r;
        }
      }
      auto solve = [&](const VectorXd& rhs) -> VectorXd {
        return use_ldlt ? VectorXd(ldlt.solve(rhs)) : VectorXd(chol.solve(rhs));
      };

      // A(X Rd Z^-1)
      std::vector<MatrixXd> xrz(nb_);
      for (int b = 0; b < nb_; ++b) xrz[b] = r.X[b] * rd[b] * zinv[b];
      const VectorXd a_xrz = apply(xrz);

      // predictor
      VectorXd dy = solve(a_xrz - p_.c);
      std::vector<MatrixXd> dz(nb_), dx(nb_);
      auto atdy = adjoint_apply(dy);
      for (int b = 0; b < nb_; ++b) {
        dz[b] = atdy[b] - rd[b];
        dx[b] = -r.X[b] - sym(r.X[b] * dz[b] * zinv[b]);
      }
      bool ok = true;
      double ap = 1.0, ad = 1.0;
      for (int b = 0; b < nb_; ++b) {
        ap = std::min(ap, max_step(r.X[b], dx[b], &ok));
        ad = std::min(ad, max_step(r.Z[b], dz[b], &ok));
      }
      if (!ok) {
        r.status = Status::numerical;
        return r;
      }
      double xz_aff = 0.0;
      for (int b = 0; b < nb_; ++b) {
        xz_aff += ((r.X[b] + ap * dx[b]).cwiseProduct(r.Z[b] + ad * dz[b])).sum();
      }
      const double mu_aff = xz_aff / n_total_;
      double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
      sigma = std::clamp(sigma, 0.0, 1.0);

      // corrector
      std::vector<MatrixXd> kz(nb_);
      for (int b = 0; b < nb_; ++b) {
        const auto nb = r.X[b].rows();
        const MatrixXd k = sigma * mu * MatrixXd::Identity(nb, nb) - dx[b] * dz[b];
        kz[b] = k * zinv[b];
      }
      const VectorXd a_kz = apply(kz);
      dy = solve(a_kz + a_xrz - p_.c);
      atdy = adjoint_apply(dy);
      for (int b = 0; b < nb_; ++b) {
        dz[b] = atdy[b] - rd[b];
        dx[b] = sym(kz[b] - r.X[b] * dz[b] * zinv[b]) - r.X[b];
      }
      ap = std::numeric_limits<double>::infinity();
      ad = std::numeric_limits<double>::infinity();
      for (int b = 0; b < nb_; ++b) {
        ap = std::min(ap, max_step(r.X[b], dx[b], &ok));
        ad = std::min(ad, max_step(r.Z[b], dz[b], &ok));
      }
      if (!ok) {
        r.status = Status::numerical;
        return r;
      }
      ap = std::min(1.0, 0.95 * ap);
      ad = std::min(1.0, 0.95 * ad);
      for (int b = 0; b < nb_; ++b) {
        r.X[b] = sym(r.X[b] + ap * dx[b]);
        r.Z[b] = sym(r.Z[b] + ad * dz[b]);
      }
      r.y += ad * dy;
      if (!r.y.allFinite()) {
        r.status = Status::numerical;
        return r;
      }
    }
    r.iterations = o_.max_iter;
    r.status = Status::max_iter;
    return r;
  }

 private:
  void initial_point(LmiResult& r) {
    double alpha = 0.0, beta = 0.0;
    double norm_c = 0.0;
    for (const auto& cb : p_.C) norm_c = std::max(norm_c, cb.norm());
    for (int i = 0; i < m_; ++i) {
      double fa = 0.0;
      for (const auto& sb : p_.A[i]) fa += std::pow(frobenius(sb.entries), 2);
      fa = std::sqrt(fa);
      alpha = std::max(alpha, (1.0 + std::abs(p_.c(i))) / (1.0 + fa));
      beta = std::max(beta, fa);
    }
    const double n = static_cast<double>(n_total_);
    alpha *= n;
    beta = (1.0 + std::max(beta, norm_c)) / std::sqrt(n);
    r.X.resize(nb_);
    r.Z.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      const int s = p_.block_sizes[b];
      r.X[b] = 10.0 * alpha * MatrixXd::Identity(s, s);
      r.Z[b] = 10.0 * beta * MatrixXd::Identity(s, s);
    }
  }

  VectorXd apply(const std::vector<MatrixXd>& x) const {
    VectorXd out = VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& sb : p_.A[i]) out(i) += sparse_inner(sb.entries, x[sb.block]);
    }
    return out;
  }

  std::vector<MatrixXd> adjoint_apply(const VectorXd& y) const {
    std::vector<MatrixXd> out(nb_);
    for (int b = 0; b < nb_; ++b) out[b] = MatrixXd::Zero(p_.block_sizes[b], p_.block_sizes[b]);
    for (int i = 0; i < m_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& sb : p_.A[i]) {
        auto& ob = out[sb.block];
        for (const auto& e : sb.entries) ob(e.row, e.col) += y(i) * e.value;
      }
    }
    return out;
  }

  // O_ij = tr(A_i X A_j Z^-1)
  MatrixXd build_schur(const std::vector<MatrixXd>& x,
                       const std::vector<MatrixXd>& zinv) const {
    MatrixXd o = MatrixXd::Zero(m_, m_);
    for (int b = 0; b < nb_; ++b) {
      const int n = p_.block_sizes[b];
      const auto& xb = x[b];
      const auto& zb = zinv[b];
      MatrixXd g(n, n);
      for (const auto& uj : uses_[b]) {
        const auto& ej = *uj.entries;
        if (static_cast<int>(ej.size()) <= n) {
          g.setZero();
          for (const auto& e : ej) {
            g.noalias() += e.value * xb.col(e.row) * zb.row(e.col);
          }
        } else {
          MatrixXd dense = MatrixXd::Zero(n, n);
          for (const auto& e : ej) dense(e.row, e.col) += e.value;
          g.noalias() = xb * dense * zb;
        }
        for (const auto& ui : uses_[b]) {
          if (ui.var < uj.var) continue;
          o(ui.var, uj.var) += sparse_inner(*ui.entries, g);
        }
      }
    }
    return o.selfadjointView<Eigen::Lower>();
  }

  const LmiProblem& p_;
  const Options& o_;
  int nb_ = 0;
  int m_ = 0;
  int n_total_ = 0;
  std::vector<std::vector<BlockUse>> uses_;
};

void append_embedded(std::vector<Entry>& out, const Matrix& m, bool real) {
  const int n = static_cast<int>(m.rows());
  constexpr double kDrop = 1e-15;
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      const double re = m(p, q).real();
      const double im = m(p, q).imag();
      if (std::abs(re) > kDrop) {
        out.push_back({p, q, re});
        if (!real) out.push_back({n + p, n + q, re});
      }
      if (!real && std::abs(im) > kDrop) {
        out.push_back({n + p, q, im});
        out.push_back({p, n + q, -im});
      }
    }
  }
}

MatrixXd embed_dense(const Matrix& m, bool real) {
  const auto n = m.rows();
  if (real) return m.real();
  MatrixXd out(2 * n, 2 * n);
  out << m.real(), -m.imag(), m.imag(), m.real();
  return out;
}

}  // namespace

LmiResult solve_lmi(const LmiProblem& p, const Options& opt) {
  if (p.C.size() != p.block_sizes.size() || p.c.size() != p.num_vars()) {
    throw DimensionError("solve_lmi: inconsistent problem data");
  }
  if (p.num_vars() == 0) throw ValidationError("solve_lmi: no variables", "sdp");
  Solver s(p, opt);
  return s.run();
}

// ---------------------------------------------------------------------------
// Model

std::vector<Matrix> hermitian_basis(int d, bool traceless) {
  std::vector<Matrix> out;
  const double r2 = std::sqrt(0.5);
  if (traceless) {
    for (int l = 1; l < d; ++l) {
      Matrix m = Matrix::Zero(d, d);
      const double s = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
      for (int j = 0; j < l; ++j) m(j, j) = s;
      m(l, l) = -l * s;
      out.push_back(std::move(m));
    }
  } else {
    for (int j = 0; j < d; ++j) {
      Matrix m = Matrix::Zero(d, d);
      m(j, j) = 1.0;
      out.push_back(std::move(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix re = Matrix::Zero(d, d);
      re(j, k) = r2;
      re(k, j) = r2;
      out.push_back(std::move(re));
      Matrix im = Matrix::Zero(d, d);
      im(j, k) = cplx(0.0, r2);
      im(k, j) = cplx(0.0, -r2);
      out.push_back(std::move(im));
    }
  }
  return out;
}

int Model::add_variable(int rows, int cols, std::vector<Matrix> basis, Matrix offset) {
  vars_.push_back({rows, cols, std::move(basis), std::move(offset)});
  return static_cast<int>(vars_.size()) - 1;
}

int Model::add_hermitian(int dim, std::optional<double> fixed_trace) {
  if (dim < 1) throw DimensionError("add_hermitian: dimension must be positive");
  if (fixed_trace) {
    return add_variable(dim, dim, hermitian_basis(dim, true),
                        Matrix::Identity(dim, dim) * (*fixed_trace / dim));
  }
  return add_variable(dim, dim, hermitian_basis(dim, false), Matrix::Zero(dim, dim));
}

int Model::add_complex(int rows, int cols) {
  std::vector<Matrix> basis;
  for (int q = 0; q < cols; ++q) {
    for (int p = 0; p < rows; ++p) {
      Matrix re = Matrix::Zero(rows, cols);
      re(p, q) = 1.0;
      basis.push_back(re);
      Matrix im = Matrix::Zero(rows, cols);
      im(p, q) = cplx(0.0, 1.0);
      basis.push_back(im);
    }
  }
  return add_variable(rows, cols, std::move(basis), Matrix::Zero(rows, cols));
}

int Model::add_scalar() { return add_hermitian(1); }

int Model::add_block(int dim, bool real) {
  if (dim < 1) throw DimensionError("add_block: dimension must be positive");
  blocks_.push_back({dim, real, {}, Matrix::Zero(dim, dim)});
  return static_cast<int>(blocks_.size()) - 1;
}

void Model::add_term(int block, int var, LinearMap map) {
  blocks_.at(block).terms.push_back({var, std::move(map)});
  (void)vars_.at(var);
}

void Model::add_diag_term(int block, int var, int offset, double scale) {
  const int bd = blocks_.at(block).dim;
  const auto& v = vars_.at(var);
  if (v.rows != v.cols || offset + v.rows > bd) {
    throw DimensionError("add_diag_term: variable does not fit in block");
  }
  add_term(block, var, [bd, offset, scale](const Matrix& x) {
    Matrix out = Matrix::Zero(bd, bd);
    out.block(offset, offset, x.rows(), x.cols()) = scale * x;
    return out;
  });
}

void Model::add_constant(int block, const Matrix& m) {
  auto& b = blocks_.at(block);
  if (m.rows() != b.dim || m.cols() != b.dim) {
    throw DimensionError("add_constant: wrong dimension");
  }
  b.constant += m;
}

void Model::add_objective(int var, const Matrix& g) {
  const auto& v = vars_.at(var);
  if (g.rows() != v.rows || g.cols() != v.cols) {
    throw DimensionError("add_objective: coefficient has wrong shape");
  }
  objective_.push_back({var, g});
}

int Model::num_scalar_vars() const {
  int m = 0;
  for (const auto& v : vars_) m += static_cast<int>(v.basis.size());
  return m;
}

Solution Model::minimize(const Options& opt) const {
  // scalar index of each variable's first basis element
  std::vector<int> first(vars_.size());
  int m = 0;
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    first[v] = m;
    m += static_cast<int>(vars_[v].basis.size());
  }

  LmiProblem p;
  p.A.resize(m);
  p.c = VectorXd::Zero(m);
  double obj_const = obj_const_;
  for (const auto& o : objective_) {
    const auto& v = vars_[o.var];
    for (std::size_t k = 0; k < v.basis.size(); ++k) {
      p.c(first[o.var] + k) += (o.g.adjoint() * v.basis[k]).trace().real();
    }
    obj_const += (o.g.adjoint() * v.offset).trace().real();
  }

  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& blk = blocks_[b];
    Matrix f0 = blk.constant;
    std::vector<std::vector<Entry>> per_var(m);
    for (const auto& t : blk.terms) {
      const auto& v = vars_[t.var];
      for (std::size_t k = 0; k < v.basis.size(); ++k) {
        const Matrix img = t.map(v.basis[k]);
        if (img.rows() != blk.dim || img.cols() != blk.dim) {
          throw DimensionError("sdp term maps into the wrong block dimension");
        }
        append_embedded(per_var[first[t.var] + k], img, blk.real);
      }
      if (v.offset.cwiseAbs().maxCoeff() > 0.0) f0 += t.map(v.offset);
    }
    if (qmat::hermiticity_defect(f0) > 1e-9 * std::max(1.0, f0.cwiseAbs().maxCoeff())) {
      throw ValidationError("sdp block constant is not Hermitian", "sdp");
    }
    p.block_sizes.push_back(blk.real ? blk.dim : 2 * blk.dim);
    p.C.push_back(-embed_dense(0.5 * (f0 + f0.adjoint()), blk.real));
    for (int i = 0; i < m; ++i) {
      if (per_var[i].empty()) continue;
      // merge duplicate coordinates
      auto& es = per_var[i];
      std::sort(es.begin(), es.end(), [](const Entry& a, const Entry& c) {
        return a.row != c.row ? a.row < c.row : a.col < c.col;
      });
      std::vector<Entry> merged;
      for (const auto& e : es) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
          merged.back().value += e.value;
        } else {
          merged.push_back(e);
        }
      }
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [](const Entry& e) { return std::abs(e.value) <= 1e-15; }),
                   merged.end());
      if (!merged.empty()) p.A[i].push_back({static_cast<int>(b), std::move(merged)});
    }
  }
  for (int i = 0; i < m; ++i) {
    if (p.A[i].empty()) {
      throw ValidationError("sdp variable component does not appear in any block", "sdp");
    }
  }

  const LmiResult r = solve_lmi(p, opt);
  Solution s;
  s.status = r.status;
  s.value = r.primal_value + obj_const;
  s.dual_value = r.dual_value + obj_const;
  s.iterations = r.iterations;
  s.primal_infeasibility = r.primal_infeasibility;
  s.dual_infeasibility = r.dual_infeasibility;
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    Matrix x = vars_[v].offset;
    for (std::size_t k = 0; k < vars_[v].basis.size(); ++k) {
      x += r.y(first[v] + k) * vars_[v].basis[k];
    }
    s.vars.push_back(std::move(x));
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& x = r.X[b];
    if (blocks_[b].real) {
      s.duals.push_back(x.cast<cplx>());
    } else {
      const auto n = blocks_[b].dim;
      Matrix w(n, n);
      w.real() = x.topLeftCorner(n, n) + x.bottomRightCorner(n, n);
      w.imag() = x.bottomLeftCorner(n, n) - x.topRightCorner(n, n);
      s.duals.push_back(std::move(w));
    }
  }
  return s;
}

}  // namespace softcover::sdp
