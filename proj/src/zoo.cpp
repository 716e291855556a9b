#include "softcover/zoo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace softcover::zoo {

using channels::Channel;

namespace {

qmat::SystemSignature in_sig(int d) { return qmat::SystemSignature::single(d, "A"); }
qmat::SystemSignature out_sig(int d) { return qmat::SystemSignature::single(d, "B"); }

void check_dim(int d) {
  if (d < 1 || d > 64) throw ValidationError("dimension must be in [1, 64]", "d");
}

void check_prob(double p, const char* key, double hi = 1.0) {
  if (!(p >= 0.0 && p <= hi)) {
    throw ValidationError(std::string(key) + " must be in [0, " +
                              std::to_string(hi) + "]",
                          key);
  }
}

Matrix shift(int d) {
  Matrix x = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

Matrix clock(int d) {
  Matrix z = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
  }
  return z;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const char* key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse '" + s + "' as a number", key);
  }
}

int parse_int(const std::string& s, const char* key) {
  const double v = parse_number(s, key);
  if (v != std::floor(v)) throw ValidationError("'" + s + "' is not an integer", key);
  return static_cast<int>(v);
}

}  // namespace

Channel identity(int d) {
  check_dim(d);
  return Channel({Matrix::Identity(d, d)}, in_sig(d), out_sig(d), "identity",
                 {{"d", d}});
}

Channel depolarizing(int d, double p) {
  check_dim(d);
  const double d2 = static_cast<double>(d) * d;
  check_prob(p, "p", d2 / (d2 - 1.0));
  const double w0 = 1.0 - p * (d2 - 1.0) / d2;
  const double w = p / d2;
  std::vector<Matrix> kraus;
  const Matrix x = shift(d);
  const Matrix z = clock(d);
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix zb = Matrix::Identity(d, d);
    for (int b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? w0 : w;
      if (weight > 0.0) kraus.push_back(std::sqrt(weight) * xa * zb);
      zb = zb * z;
    }
    xa = xa * x;
  }
  return Channel(std::move(kraus), in_sig(d), out_sig(d), "depolarizing",
                 {{"d", d}, {"p", p}});
}

Channel dephasing(double p) {
  check_prob(p, "p");
  std::vector<Matrix> kraus;
  if (p < 1.0) kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(2, 2));
  if (p > 0.0) {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    kraus.push_back(std::sqrt(p) * z);
  }
  return Channel(std::move(kraus), in_sig(2), out_sig(2), "dephasing", {{"p", p}});
}

Channel amplitude_damping(double gamma) {
  check_prob(gamma, "gamma");
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  std::vector<Matrix> kraus{k0};
  if (gamma > 0.0) kraus.push_back(k1);
  return Channel(std::move(kraus), in_sig(2), out_sig(2), "amplitude_damping",
                 {{"gamma", gamma}});
}

Channel erasure(int d, double p) {
  check_dim(d);
  check_prob(p, "p");
  std::vector<Matrix> kraus;
  if (p < 1.0) {
    Matrix k0 = Matrix::Zero(d + 1, d);
    k0.topRows(d) = std::sqrt(1.0 - p) * Matrix::Identity(d, d);
    kraus.push_back(std::move(k0));
  }
  if (p > 0.0) {
    for (int i = 0; i < d; ++i) {
      Matrix k = Matrix::Zero(d + 1, d);
      k(d, i) = std::sqrt(p);
      kraus.push_back(std::move(k));
    }
  }
  return Channel(std::move(kraus), in_sig(d), out_sig(d + 1), "erasure",
                 {{"d", d}, {"p", p}});
}

Channel cq_measurement(const Matrix& basis, const std::vector<Matrix>& outputs) {
  const int d = static_cast<int>(basis.rows());
  if (basis.cols() != d || static_cast<int>(outputs.size()) != d) {
    throw DimensionError("cq_measurement needs a square basis and one output per element");
  }
  if ((basis.adjoint() * basis - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("cq_measurement basis is not orthonormal", "basis");
  }
  const int dout = static_cast<int>(outputs.front().rows());
  std::vector<Matrix> kraus;
  for (int x = 0; x < d; ++x) {
    qmat::DensityOperator wx(outputs[x]);
    const auto ed = qmat::eigh(wx.mat());
    for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
      if (ed.values(k) <= 1e-14) continue;
      kraus.push_back(std::sqrt(ed.values(k)) * ed.vectors.col(k) *
                      basis.col(x).adjoint());
    }
  }
  return Channel(std::move(kraus), in_sig(d), out_sig(dout), "cq_measurement");
}

Channel measure(int d, const std::string& basis) {
  check_dim(d);
  Matrix b;
  if (basis == "z") {
    b = Matrix::Identity(d, d);
  } else if (basis == "x") {
    b.resize(d, d);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        b(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                             2.0 * std::numbers::pi * j * k / d);
      }
    }
  } else {
    throw ValidationError("measurement basis must be 'z' or 'x'", "basis");
  }
  std::vector<Matrix> outputs;
  for (int x = 0; x < d; ++x) {
    Matrix o = Matrix::Zero(d, d);
    o(x, x) = 1.0;
    outputs.push_back(std::move(o));
  }
  auto ch = cq_measurement(b, outputs);
  return Channel(ch.kraus(), in_sig(d), out_sig(d), "measure",
                 {{"d", d}, {"basis", basis}});
}

Channel from_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty() || parts[0].empty()) {
    throw ValidationError("empty channel spec", "channel");
  }
  const std::string& name = parts[0];
  const std::size_t np = parts.size() - 1;
  auto bad = [&]() {
    return ValidationError("wrong number of parameters in channel spec '" + spec + "'",
                           "channel");
  };
  if (name == "identity" || name == "id") {
    if (np > 1) throw bad();
    return identity(np == 1 ? parse_int(parts[1], "d") : 2);
  }
  if (name == "depolarizing" || name == "depol") {
    if (np == 1) return depolarizing(2, parse_number(parts[1], "p"));
    if (np == 2) return depolarizing(parse_int(parts[1], "d"), parse_number(parts[2], "p"));
    throw bad();
  }
  if (name == "dephasing") {
    if (np != 1) throw bad();
    return dephasing(parse_number(parts[1], "p"));
  }
  if (name == "amplitude_damping" || name == "ad") {
    if (np != 1) throw bad();
    return amplitude_damping(parse_number(parts[1], "gamma"));
  }
  if (name == "erasure") {
    if (np == 1) return erasure(2, parse_number(parts[1], "p"));
    if (np == 2) return erasure(parse_int(parts[1], "d"), parse_number(parts[2], "p"));
    throw bad();
  }
  if (name == "measure" || name == "cq_measurement") {
    if (np == 0) return measure(2);
    if (np == 1) return measure(parse_int(parts[1], "d"));
    if (np == 2) return measure(parse_int(parts[1], "d"), parts[2]);
    throw bad();
  }
  throw ValidationError("unknown channel '" + name + "' (see 'zoo list')", "channel");
}

std::vector<ZooEntry> list() {
  return {
      {"identity", "d", "identity channel on C^d (default d=2)"},
      {"depolarizing", "[d:]p", "(1-p) rho + p 1/d, p in [0, d^2/(d^2-1)]"},
      {"dephasing", "p", "qubit (1-p) rho + p Z rho Z"},
      {"amplitude_damping", "gamma", "qubit amplitude damping"},
      {"erasure", "[d:]p", "erasure to a flag level d"},
      {"measure", "[d[:z|x]]", "measure-and-prepare in the z or Fourier basis"},
  };
}

}  // namespace softcover::zoo
