#pragma once

// Heuristic minimization of functions of an input state over the two
// feasible sets that appear in the covering bounds:
//
//   S(rho, N)     = { sigma >= 0, Tr sigma = 1 : N(sigma) = rho }
//   S_eps(rho, N) = { sigma >= 0, Tr sigma = 1 : 1/2 ||N(sigma) - rho||_1 <= eps }
//
// Both are searched by multi-start coordinate descent in affine coordinates
// around a feasible center. Results are upper estimates of the infimum unless
// the feasible set is a single point.

#include <cstdint>
#include <functional>
#include <vector>

#include "softcover/channels.hpp"
#include "softcover/qmat.hpp"
#include "softcover/rng.hpp"

namespace softcover::search {

struct Options {
  int starts = 32;
  int max_sweeps = 40;
  /// Coordinate step at which descent stops.
  double tol = 1e-6;
};

struct Result {
  double value = 0.0;
  Matrix argmin;
  /// True when the feasible set is a single point.
  bool exact = false;
  int evaluations = 0;
  int starts = 0;
};

using Objective = std::function<double(const Matrix& sigma)>;

/// sigma(s) = center + sum_k s_k directions[k].
struct AffineSection {
  Matrix center;
  std::vector<Matrix> directions;
  /// Smallest eigenvalue of the center.
  double margin = 0.0;
};

/// Parametrization of S(rho, N) centered at the point maximizing the
/// smallest eigenvalue. Throws ValidationError when S(rho, N) is empty.
AffineSection feasible_section(const Matrix& rho_b, const channels::Channel& n,
                               double tol = 1e-8);

/// min over input states of 1/2 ||N(sigma) - rho||_1 and a minimizer.
std::pair<Matrix, double> closest_input(const Matrix& rho_b,
                                        const channels::Channel& n);

Result minimize_over_section(const AffineSection& section, const Objective& f,
                             const Options& opt, Rng& rng);

/// Minimizes over S_eps(rho, N). Throws ValidationError when it is empty.
Result minimize_over_ball(const Matrix& rho_b, const channels::Channel& n,
                          double eps, const Objective& f, const Options& opt,
                          Rng& rng);

/// Generic multi-start coordinate descent over center + span(directions)
/// restricted to `feasible`; `center` must itself be feasible.
Result coordinate_descent(const Matrix& center, const std::vector<Matrix>& directions,
                          const std::function<bool(const Matrix&)>& feasible,
                          const Objective& f, const Options& opt, Rng& rng);

}  // namespace softcover::search
