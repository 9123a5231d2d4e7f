#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace envforge {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. `offset` is the byte position of the
/// first character that could not be consumed.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

/// Identifier that names neither a declared parameter nor a known function.
class UnknownIdentifier : public Error {
public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' (at byte " + std::to_string(offset) + ")"),
        name(name), offset(offset) {}
  std::string name;
  std::size_t offset;
};

/// Function called with the wrong number of arguments.
class ArityError : public Error {
public:
  ArityError(const std::string& name, std::size_t expected, std::size_t got, std::size_t offset)
      : Error("function '" + name + "' expects " + std::to_string(expected) +
              " argument(s), got " + std::to_string(got) + " (at byte " +
              std::to_string(offset) + ")"),
        name(name), offset(offset) {}
  std::string name;
  std::size_t offset;
};

/// Evaluation left the real domain (sqrt of a negative, log of a
/// non-positive, division by zero, fractional power of a non-positive base).
/// `subexpr` is the offending sub-expression, pretty-printed.
class DomainError : public Error {
public:
  DomainError(const std::string& what, const std::string& subexpr)
      : Error(what + " in '" + subexpr + "'"), subexpr(subexpr) {}
  std::string subexpr;
};

/// Transport or log map requested at (numerically) antipodal points.
class AntipodalError : public Error {
public:
  AntipodalError() : Error("antipodal points: transport/log undefined") {}
};

/// Curve with a (numerically) vanishing velocity where a tangent is needed.
class DegenerateCurve : public Error {
public:
  using Error::Error;
};

/// Space curve with (numerically) vanishing curvature where a binormal is needed.
class VanishingCurvature : public Error {
public:
  using Error::Error;
};

/// Catalog lookup with a name outside the registry.
class UnknownCatalogEntry : public Error {
public:
  explicit UnknownCatalogEntry(const std::string& name)
      : Error("unknown catalog entry '" + name + "'"), name(name) {}
  std::string name;
};

/// Grid too small for the 5-point limit treatment.
class GridTooCoarse : public Error {
public:
  using Error::Error;
};

/// Kernel requested at a sample where the normal's Jacobian has full rank.
class FullRank : public Error {
public:
  using Error::Error;
};

/// Operation that only applies to non-unique families requested on a unique one.
class NotApplicable : public Error {
public:
  using Error::Error;
};

/// Auxiliary point lies on the hyperplane at every sample; mirror undefined.
class InadmissiblePoint : public Error {
public:
  using Error::Error;
};

/// Reconstruction chord orthogonal to the mirror normal at every sample.
class GrazingNormal : public Error {
public:
  using Error::Error;
};

/// Scene file failed validation. `path` is the JSON field path.
class SceneError : public Error {
public:
  SceneError(const std::string& path, const std::string& msg)
      : Error("scene field '" + path + "': " + msg), path(path) {}
  std::string path;
};

}  // namespace envforge
