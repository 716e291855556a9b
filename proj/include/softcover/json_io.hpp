#pragma once

// JSON (de)serialization of matrices and states, plus shortest round-trip
// number formatting shared by the CSV writers.

#include <string>

#include <json.hpp>

#include "softcover/qmat.hpp"

namespace softcover {

using json = nlohmann::json;

namespace io {

/// {"rows","cols","re":[...],"im":[...],"dims":[...],"labels":[...]},
/// row-major. `dims`/`labels` are emitted only when a signature is given.
json matrix_to_json(const Matrix& m, const qmat::SystemSignature* sig = nullptr);
/// Inverse of matrix_to_json; fills `sig` when the keys are present,
/// otherwise a single system "A" of the row dimension.
Matrix matrix_from_json(const json& j, qmat::SystemSignature* sig = nullptr);

json state_to_json(const qmat::DensityOperator& rho);
qmat::DensityOperator state_from_json(const json& j);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

json read_json_file(const std::string& path);

}  // namespace io
}  // namespace softcover
