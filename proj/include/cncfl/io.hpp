#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cncfl/types.hpp"

namespace cncfl {

/// Signal text format: one sample per line, '\n' terminated, written with
/// 17 significant digits so that reading back is lossless. Blank lines are
/// ignored on input; anything else that is not a finite number is an error.
Signal parse_signal(std::istream &in);
Signal read_signal(const std::filesystem::path &path);

std::string format_signal(const Signal &x);
void write_signal(const std::filesystem::path &path, const Signal &x);

/// Shortest decimal text that reads back as exactly `value`.
std::string format_double(double value);

} // namespace cncfl
