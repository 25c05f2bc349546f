#pragma once

#include "jumpdiff/simulator.hpp"

#include <iosfwd>
#include <string>

namespace jumpdiff {

//! CSV with header "t,x", 17 significant digits.
void write_path_csv(const PathSample& path, std::ostream& out);
PathSample read_path_csv(std::istream& in);

//! Binary layout (little-endian):
//!   "JDPF", u8 version = 1, 3 reserved bytes,
//!   u64 count, f64 mesh, f64 horizon, u64 substeps, f64 burn_in, f64 x0,
//!   u64 seed, u64 stream, f64 values[count].
void write_path_binary(const PathSample& path, std::ostream& out);
PathSample read_path_binary(std::istream& in);

void save_path(const PathSample& path, const std::string& file, bool binary);
//! Reads either format, detected from the magic bytes.
PathSample load_path(const std::string& file);

} // namespace jumpdiff
