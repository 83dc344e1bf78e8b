#pragma once

#include "chernoff/grid_function.hpp"

#include <iosfwd>
#include <string>

namespace chernoff {

// CSV: coordinates..., value. Full 17-digit precision.
void write_csv(std::ostream& out, const GridFunction& f);
void write_csv(const std::string& path, const GridFunction& f);

// Binary: uint32 d, uint64 counts[d], f64 (lower, upper)[d], f64 payload; little-endian.
void write_binary(std::ostream& out, const GridFunction& f);
GridFunction read_binary(std::istream& in);
void write_binary(const std::string& path, const GridFunction& f);
GridFunction read_binary(const std::string& path);

// Space-time: grid header, uint64 time count, f64 times, then payloads in order.
void write_binary(std::ostream& out, const SpaceTimeFunction& u);
SpaceTimeFunction read_space_time_binary(std::istream& in);

}  // namespace chernoff
