#pragma once

#include <stdexcept>
#include <string>

namespace katofan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArithmeticOverflow : public Error { public: using Error::Error; };
class ElementNotInMonoid : public Error { public: using Error::Error; };
class NotAnIdeal : public Error { public: using Error::Error; };
class NotStronglyConvex : public Error { public: using Error::Error; };
class NotSimplicial : public Error { public: using Error::Error; };
class NotSharp : public Error { public: using Error::Error; };
class InvalidFan : public Error { public: using Error::Error; };
class VectorOutsideSupport : public Error { public: using Error::Error; };
class ResolutionBudgetExceeded : public Error { public: using Error::Error; };
class NotContained : public Error { public: using Error::Error; };
class HypothesisViolated : public Error { public: using Error::Error; };
class InvalidInput : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class NotNilpotent : public Error { public: using Error::Error; };
class InvalidPunctureCount : public Error { public: using Error::Error; };

/// Malformed input document. `path` is a JSON pointer-like location.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A loaded entity violates one of its structural invariants.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& entity, const std::string& what)
      : Error(entity + ": " + what), entity_(entity) {}
  const std::string& entity() const { return entity_; }

 private:
  std::string entity_;
};

}  // namespace katofan
