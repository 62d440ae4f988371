#pragma once

#include <stdexcept>
#include <string>

namespace pnrmzi {

/// Root of every library error. The CLI maps these to exit code 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A post-selection was requested on an event with G_N = 0.
class ZeroProbability : public Error {
 public:
  using Error::Error;
};

/// The amplitude cutoff needed for the requested tail tolerance exceeds the hard maximum.
class CutoffOverflow : public Error {
 public:
  using Error::Error;
};

/// A rotation block larger than the supported photon-number ceiling.
class SizeExceeded : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Every record is phase-blind (overflow or vacuum), so the likelihood is flat.
class DegenerateLikelihood : public Error {
 public:
  using Error::Error;
};

}  // namespace pnrmzi
