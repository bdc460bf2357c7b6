#ifndef DLAUT_ERRORS_HPP
#define DLAUT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlaut {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on the prime or the number of variables.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// A p-adic digit or automorphism level beyond the available precision is needed.
class InsufficientPrecision : public Error {
 public:
  using Error::Error;
};

class NotAUnit : public Error {
 public:
  using Error::Error;
};

class NotGL : public Error {
 public:
  using Error::Error;
};

/// Images of the x_i are not the x_i themselves.
class NotInStabilizer : public Error {
 public:
  using Error::Error;
};

/// A level perturbation is not a scalar multiple of x_i^{-p^k}.
class NotSigmaForm : public Error {
 public:
  using Error::Error;
};

class InconsistentAction : public Error {
 public:
  using Error::Error;
};

class WindowTooLarge : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dlaut

#endif  // DLAUT_ERRORS_HPP
