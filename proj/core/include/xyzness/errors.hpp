#pragma once

#include <stdexcept>
#include <string>

namespace xyzness {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Theta series cannot converge (Im(tau) <= 0) or exceeded the term cap.
struct NonConvergentError : Error {
  using Error::Error;
};

// |Im(z)| so large that the q-compensation leaves floating range.
struct OverflowError : Error {
  using Error::Error;
};

struct UnknownIdentityError : Error {
  using Error::Error;
};

// A theta denominator is (numerically) zero; message names the factor.
struct SingularParameterError : Error {
  using Error::Error;
};

struct DegenerateStateError : Error {
  using Error::Error;
};

struct InvalidStateError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct WrongRegimeError : Error {
  using Error::Error;
};

// Lax normalization theta2bar(a + m*eta) vanishes at a reachable site.
struct PoleAtSiteError : Error {
  PoleAtSiteError(const std::string& msg, int m_index) : Error(msg), m(m_index) {}
  int m;
};

// A b_n denominator vanishes without a compensating zero: the
// opposite-chirality resonance. Carries the offending index.
struct PoleInBError : Error {
  PoleInBError(const std::string& msg, int n_index) : Error(msg), n(n_index) {}
  int n;
};

struct NonHermitianResultError : Error {
  using Error::Error;
};

struct OddSizeError : Error {
  using Error::Error;
};

struct ClosureViolatedError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace xyzness
