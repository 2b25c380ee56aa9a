#pragma once

#include <iosfwd>
#include <string>

#include "geodissip/integrate.hpp"

namespace geodissip::io {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

enum class Format { csv, jsonl };

/// Columns: t, x1..xn, F1..Fk, G, detSigma_full, dG_dt_fd. Every stride-th
/// sample is written; the final sample is always included.
void write_trajectory(std::ostream& out, std::span<const TrajectorySample> traj,
                      Format format, int stride = 1);

/// Parses trajectories written by write_trajectory. The expected-rate column
/// is not serialized; parsed samples carry NaN there.
std::vector<TrajectorySample> read_trajectory(std::istream& in, Format format);

Format parse_format(const std::string& name);

}  // namespace geodissip::io
