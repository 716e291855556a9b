#pragma once

#include <stdexcept>
#include <string>

namespace softcover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or subsystem signatures do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter or input object violates its documented range or invariant.
/// `key()` names the offending parameter when one is known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// An operator's support is not contained in the support it must live in.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// The semidefinite-program solver did not reach the requested accuracy.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A requested computation exceeds the dense-algebra dimension cap.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, long long total_dim)
      : Error(what), total_dim_(total_dim) {}
  long long total_dim() const noexcept { return total_dim_; }

 private:
  long long total_dim_;
};

}  // namespace softcover
