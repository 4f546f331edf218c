#pragma once

#include <stdexcept>
#include <string>

namespace kloos {

// Every library failure derives from Error so callers (the CLI in particular)
// can map the whole family onto a single exit code.
class Error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class NonCoprimeModuli : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class DivisorLimitExceeded : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class InvalidBump : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionViolation(what);
}

}  // namespace kloos
