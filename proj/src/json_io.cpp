#include "softcover/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace softcover::io {

json matrix_to_json(const Matrix& m, const qmat::SystemSignature* sig) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
  }
  json j = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
  if (sig != nullptr) {
    j["dims"] = sig->dims();
    j["labels"] = sig->labels();
  }
  return j;
}

Matrix matrix_from_json(const json& j, qmat::SystemSignature* sig) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re")) {
    throw ValidationError("matrix JSON needs rows, cols and re", "matrix");
  }
  const auto rows = j.at("rows").get<long>();
  const auto cols = j.at("cols").get<long>();
  if (rows < 1 || cols < 1) {
    throw ValidationError("matrix JSON has non-positive shape", "rows");
  }
  const auto& re = j.at("re");
  const bool has_im = j.contains("im");
  if (static_cast<long>(re.size()) != rows * cols ||
      (has_im && static_cast<long>(j.at("im").size()) != rows * cols)) {
    throw ValidationError("matrix JSON entry count does not match shape", "re");
  }
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      const double im = has_im ? j.at("im")[idx].get<double>() : 0.0;
      m(i, k) = cplx(re[idx].get<double>(), im);
    }
  }
  if (sig != nullptr) {
    if (j.contains("dims")) {
      auto dims = j.at("dims").get<std::vector<int>>();
      std::vector<std::string> labels;
      if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
      } else {
        for (std::size_t k = 0; k < dims.size(); ++k) {
          labels.push_back(std::string(1, static_cast<char>('A' + k)));
        }
      }
      *sig = qmat::SystemSignature(std::move(dims), std::move(labels));
    } else {
      *sig = qmat::SystemSignature::single(static_cast<int>(rows));
    }
  }
  return m;
}

json state_to_json(const qmat::DensityOperator& rho) {
  return matrix_to_json(rho.mat(), &rho.sig());
}

qmat::DensityOperator state_from_json(const json& j) {
  qmat::SystemSignature sig;
  Matrix m = matrix_from_json(j, &sig);
  const bool sub = j.value("subnormalized", false);
  return qmat::DensityOperator(std::move(m), std::move(sig), qmat::kDefaultTol,
                               sub);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'", "file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what(), "file");
  }
}

}  // namespace softcover::io
