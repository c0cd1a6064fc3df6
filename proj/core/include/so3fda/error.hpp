#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace so3fda {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a geometric operation (non-orthonormal matrix,
/// rank-deficient projection, cut-locus logarithm, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Two curves were expected to share a time grid but do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Consecutive samples of a rotation curve are too far apart to fix the
/// quaternion sign unambiguously.
class LiftError : public Error {
 public:
  LiftError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// The pointwise extrinsic mean is not unique at the listed grid indices.
class PemUndefinedError : public Error {
 public:
  PemUndefinedError(const std::string& what, std::vector<std::size_t> points)
      : Error(what), points_(std::move(points)) {}
  const std::vector<std::size_t>& points() const noexcept { return points_; }

 private:
  std::vector<std::size_t> points_;
};

}  // namespace so3fda
