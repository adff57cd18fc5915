// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_ERROR_HPP
#define DIFFEST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace diffest
{

// Numeric values are shared with the C API status codes in diffest.h.
enum class ErrorCode : int
{
  Structural = 1,      // shape/length/index mismatch
  Underdetermined = 2, // fewer than three solutions
  Config = 3,          // invalid parameter or configuration file
  Degenerate = 4,      // zero true-error norm and similar
  Detached = 5,        // deflection beyond the attached-shock limit
  InvalidShock = 6,    // subsonic normal Mach number
  RootFind = 7,        // bracket or convergence failure
  Geometry = 8,        // point not covered by a region map
  Positivity = 9,      // negative density or pressure in a run
  Io = 10,
  Internal = 99
};

const char *to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what)
{
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string &what)
{
  if (!cond)
  {
    throw Error(code, what);
  }
}

}  // namespace diffest

#endif
