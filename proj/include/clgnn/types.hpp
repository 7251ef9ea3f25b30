#ifndef CLGNN_TYPES_HPP_
#define CLGNN_TYPES_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace clgnn {

// Dense numeric workhorse: 64-bit floats, row-major storage.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Recoverable error categories surfaced by the public ops.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateBatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeBoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ParameterError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace clgnn

#endif  // CLGNN_TYPES_HPP_
