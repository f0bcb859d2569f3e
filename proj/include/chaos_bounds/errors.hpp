#pragma once

#include <stdexcept>
#include <string>

namespace chaos_bounds {

// Every failure raised by the library derives from Error. The CLI maps all of
// them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SupercriticalError : public Error {
 public:
  using Error::Error;
};

class InsufficientMoments : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class DivergentModel : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  using Error::Error;
};

class EmptyInterval : public Error {
 public:
  using Error::Error;
};

}  // namespace chaos_bounds
