#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cptp {

// Dense complex types templated on the real scalar. The library itself is
// instantiated for double; the aliases below are what the rest of the code uses.
template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using MatrixT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using SparseMatrixT = Eigen::SparseMatrix<ComplexT<Real>>;

using Real = double;
using Complex = ComplexT<Real>;
using Matrix = MatrixT<Real>;
using Vector = VectorT<Real>;
using SparseMatrix = SparseMatrixT<Real>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters (negative decay times, dimension overflow, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An implicit flow met a (numerically) singular linear system.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Truncated rank still exceeds the configured cap.
class RankLimitError : public Error {
 public:
  using Error::Error;
};

/// The state factor vanished or became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A reference solution failed its halving self-check.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cptp
