#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace schlafli {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or degenerate geometric input (off-sheet points, zero directions,
/// coplanar hulls, non-loxodromic elements, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A deformation changed the face lattice inside a finite-difference stencil
/// or a perturbation probe.
class CombinatorialChangeError : public Error {
 public:
  using Error::Error;
};

/// The imaginary part of a complex length jumped by a full turn inside a stencil.
class BranchCrossingError : public Error {
 public:
  using Error::Error;
};

class NonLoxodromicError : public GeometryError {
 public:
  NonLoxodromicError(const std::string& what, std::size_t index)
      : GeometryError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed input file; carries the file path and a JSON pointer.
class InputError : public Error {
 public:
  InputError(std::string path, std::string pointer, const std::string& what)
      : Error(path + ":" + pointer + ": " + what),
        path_(std::move(path)),
        pointer_(std::move(pointer)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string path_;
  std::string pointer_;
};

}  // namespace schlafli
