#pragma once

#include <stdexcept>
#include <string>

namespace unicirc {

// Base class for all library errors so callers can catch the whole family.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters violate a documented precondition (convergence range, sign
// prefactor domain, bad grid sizes, ...).
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// The requested distribution is an atom (unimodular N = 1) and has no density.
class DegenerateEnsemble : public Error {
 public:
  using Error::Error;
};

// Matrix-model sampling is only defined for beta in {1, 2, 4}.
class UnsupportedBeta : public Error {
 public:
  using Error::Error;
};

// Quadrature oracle is limited to N in {2, 3} (cost, not theory).
class UnsupportedN : public Error {
 public:
  using Error::Error;
};

// An eigenvalue modulus strayed too far from the unit circle.
class NotUnitary : public Error {
 public:
  using Error::Error;
};

class EigensolverFailure : public Error {
 public:
  using Error::Error;
};

// Kramers pairing found a partner gap above tolerance.
class PairingFailure : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

// Fourier coefficient enumeration hit n_max while terms were still large.
class TruncationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace unicirc
