#pragma once

// error taxonomy shared by the library and the command-line tool

#include <stdexcept>
#include <string>

namespace polyscat {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed or inconsistent inputs (bad dimensions, duty sums, duplicate entries, ...)
struct validation_error : error {
  using error::error;
};

// out-of-range harmonic / direction / load-port indices
struct index_error : error {
  using error::error;
};

// structurally valid inputs outside an operation's domain (nonpositive frequency, zero excitation, ...)
struct domain_error : error {
  using error::error;
};

// unreadable or syntactically invalid files; message names file and location
struct parse_error : error {
  using error::error;
};

// interaction system too ill-conditioned to invert; carries the estimate that tripped the check
struct singular_error : error {
  double rcond_estimate;
  singular_error(const std::string& what, double rcond)
      : error(what), rcond_estimate(rcond) {}
};

}  // namespace polyscat
