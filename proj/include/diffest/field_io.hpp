// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_FIELD_IO_HPP
#define DIFFEST_FIELD_IO_HPP

#include <filesystem>
#include <string>

#include "diffest/field.hpp"

namespace diffest
{

// Field container. Header {nx, ny, x0, y0, dx, dy, variable tags, label} followed by
// the vectorized data as 64-bit floats.
//
// Binary layout (all little-endian):
//   "DIFFEST\0" | u32 version | i32 nx | i32 ny | f64 x0 y0 dx dy |
//   u32 len + label | u32 nvars | (u32 len + tag) * nvars | u64 count | f64 * count
//
// CSV layout: '#' header lines with the same metadata, then "kx,my,var,value" with
// one row per flat index (1-based kx, my) in vectorize order.
void write_binary(const std::filesystem::path &path, const FieldSet &state);
FieldSet read_binary(const std::filesystem::path &path);

void write_csv(const std::filesystem::path &path, const FieldSet &state);
FieldSet read_csv(const std::filesystem::path &path);

// Dispatch on extension: ".csv" is CSV, anything else is binary.
void write_fields(const std::filesystem::path &path, const FieldSet &state);
FieldSet read_fields(const std::filesystem::path &path);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace diffest

#endif
