#pragma once

#include <complex>
#include <initializer_list>
#include <utility>

#include "softcover/qmat.hpp"

namespace softcover::testing {

// Row-major literal.
inline Matrix mat(int d, std::initializer_list<std::pair<double, double>> entries) {
  Matrix m(d, d);
  int k = 0;
  for (const auto& [re, im] : entries) {
    m(k / d, k % d) = cplx(re, im);
    ++k;
  }
  return m;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline Matrix normalize(Matrix m) {
  m = 0.5 * (m + m.adjoint());
  return m / m.trace().real();
}

// M acting on the first factor of a vector on (M.cols()) x rest.
inline Vector act_first(const Matrix& m, const Vector& v) {
  const auto rest = v.size() / m.cols();
  Vector out = Vector::Zero(m.rows() * rest);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index i = 0; i < m.cols(); ++i)
      for (Eigen::Index j = 0; j < rest; ++j) out(r * rest + j) += m(r, i) * v(i * rest + j);
  return out;
}

// M acting on the last factor.
inline Vector act_last(const Matrix& m, const Vector& v) {
  const auto rest = v.size() / m.cols();
  Vector out = Vector::Zero(rest * m.rows());
  for (Eigen::Index a = 0; a < rest; ++a)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index i = 0; i < m.cols(); ++i)
        out(a * m.rows() + r) += m(r, i) * v(a * m.cols() + i);
  return out;
}

}  // namespace softcover::testing
