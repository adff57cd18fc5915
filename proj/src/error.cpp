// SPDX-License-Identifier: Apache-2.0

#include "diffest/error.hpp"

namespace diffest
{

const char *to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::Structural:
      return "structural";
    case ErrorCode::Underdetermined:
      return "underdetermined";
    case ErrorCode::Config:
      return "config";
    case ErrorCode::Degenerate:
      return "degenerate";
    case ErrorCode::Detached:
      return "detached";
    case ErrorCode::InvalidShock:
      return "invalid_shock";
    case ErrorCode::RootFind:
      return "root_find";
    case ErrorCode::Geometry:
      return "geometry";
    case ErrorCode::Positivity:
      return "positivity";
    case ErrorCode::Io:
      return "io";
    case ErrorCode::Internal:
      return "internal";
  }
  return "unknown";
}

}  // namespace diffest
