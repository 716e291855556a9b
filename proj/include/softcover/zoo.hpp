#pragma once

// Named channels and the "name:params" registry used by the CLI.

#include <string>
#include <vector>

#include "softcover/channels.hpp"

namespace softcover::zoo {

channels::Channel identity(int d);
/// (1-p) rho + p Tr(rho) 1/d through generalized Pauli Kraus operators;
/// p in [0, d^2/(d^2-1)].
channels::Channel depolarizing(int d, double p);
/// Qubit: (1-p) rho + p Z rho Z.
channels::Channel dephasing(double p);
channels::Channel amplitude_damping(double gamma);
/// Output dimension d+1, the last level being the erasure flag.
channels::Channel erasure(int d, double p);
/// N(rho) = sum_x <x|rho|x> W_x with |x> the columns of `basis`.
channels::Channel cq_measurement(const Matrix& basis,
                                 const std::vector<Matrix>& outputs);
/// Measurement in the computational ("z") or Fourier ("x") basis with
/// orthogonal pure outputs |x><x|.
channels::Channel measure(int d, const std::string& basis = "z");

/// Parses "name", "name:p" or "name:d:p".
channels::Channel from_spec(const std::string& spec);

struct ZooEntry {
  std::string name;
  std::string params;
  std::string description;
};
std::vector<ZooEntry> list();

}  // namespace softcover::zoo
