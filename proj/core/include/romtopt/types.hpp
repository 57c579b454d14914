#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace romtopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Vector4 = Eigen::Matrix<double, 4, 1>;

/// Raised when a factorization meets a non-positive pivot.
class IndefiniteMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a derived quantity is used with inputs other than the ones it was computed from.
class StaleStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// FNV-1a over the raw bytes of a vector; ties derived data to the design it came from.
inline std::uint64_t hash_vector(const Vector& v) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
  const auto n = static_cast<std::size_t>(v.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h ^ static_cast<std::uint64_t>(v.size());
}

inline std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace romtopt
