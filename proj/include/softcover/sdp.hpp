#pragma once

// Small dense semidefinite programs.
//
// Two layers. `LmiProblem` is the solver's native form over real symmetric
// blocks:
//
//     minimize  c^T y   subject to   sum_i y_i A_i - C  >= 0   (block diagonal)
//
// with dual  maximize tr(C X)  s.t.  tr(A_i X) = c_i, X >= 0. The solver is
// an infeasible-start primal-dual interior-point method (HKM direction,
// Mehrotra predictor-corrector).
//
// `Model` is a thin modeling layer on top: Hermitian and complex matrix
// variables, Hermitian LMI blocks built from linear maps of the variables,
// and a real linear objective. Complex blocks go through the embedding
// H -> [[Re H, -Im H], [Im H, Re H]].

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softcover/qmat.hpp"

namespace softcover::sdp {

enum class Status { optimal, infeasible, unbounded, max_iter, numerical };
const char* to_string(Status s);

struct Options {
  double gap_tol = 1e-9;
  double feas_tol = 1e-9;
  int max_iter = 120;
};

struct Entry {
  int row;
  int col;
  double value;
};

/// Sparse symmetric block; both triangles stored.
struct SparseBlock {
  int block;
  std::vector<Entry> entries;
};

struct LmiProblem {
  std::vector<int> block_sizes;
  std::vector<Eigen::MatrixXd> C;
  /// A[i] lists the blocks touched by variable i.
  std::vector<std::vector<SparseBlock>> A;
  Eigen::VectorXd c;

  int num_vars() const { return static_cast<int>(A.size()); }
};

struct LmiResult {
  Status status = Status::numerical;
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> X;
  std::vector<Eigen::MatrixXd> Z;
  double primal_value = 0.0;  // c^T y
  double dual_value = 0.0;    // tr(C X)
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

LmiResult solve_lmi(const LmiProblem& p, const Options& opt = {});

using LinearMap = std::function<Matrix(const Matrix&)>;

struct Solution {
  Status status = Status::numerical;
  /// Objective at the returned primal point (upper bound when minimizing).
  double value = 0.0;
  /// Dual objective (lower bound on the minimum).
  double dual_value = 0.0;
  int iterations = 0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  std::vector<Matrix> vars;
  /// Complex dual matrix per block W with tr(phi(A) X) = Re tr(A W).
  std::vector<Matrix> duals;

  double gap() const { return std::abs(value - dual_value); }
  bool ok() const { return status == Status::optimal; }
  const Matrix& var(int id) const { return vars.at(id); }
};

class Model {
 public:
  /// Hermitian dim x dim variable; with `fixed_trace` its trace is pinned.
  int add_hermitian(int dim, std::optional<double> fixed_trace = {});
  /// Unconstrained complex rows x cols variable.
  int add_complex(int rows, int cols);
  /// Real scalar (1x1 Hermitian) variable.
  int add_scalar();

  /// Hermitian LMI block "sum of terms + constant >= 0". Real blocks take
  /// only real symmetric content and skip the complex embedding.
  int add_block(int dim, bool real = false);
  void add_term(int block, int var, LinearMap map);
  /// Places the variable at rows/cols [offset, offset + dim) of the block.
  void add_diag_term(int block, int var, int offset, double scale = 1.0);
  void add_constant(int block, const Matrix& m);

  /// Adds Re tr(g^dagger X_var) to the objective.
  void add_objective(int var, const Matrix& g);
  void add_objective_constant(double c) { obj_const_ += c; }

  Solution minimize(const Options& opt = {}) const;

  int num_scalar_vars() const;

 private:
  struct Variable {
    int rows;
    int cols;
    std::vector<Matrix> basis;
    Matrix offset;
  };
  struct Term {
    int var;
    LinearMap map;
  };
  struct Block {
    int dim;
    bool real;
    std::vector<Term> terms;
    Matrix constant;
  };
  struct Objective {
    int var;
    Matrix g;
  };

  int add_variable(int rows, int cols, std::vector<Matrix> basis, Matrix offset);

  std::vector<Variable> vars_;
  std::vector<Block> blocks_;
  std::vector<Objective> objective_;
  double obj_const_ = 0.0;
};

/// Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices; with
/// `traceless` the identity direction is left out.
std::vector<Matrix> hermitian_basis(int d, bool traceless = false);

}  // namespace softcover::sdp
