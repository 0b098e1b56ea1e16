#include "cncfl/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <vector>

#include "cncfl/errors.hpp"

namespace cncfl {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

} // namespace

Signal parse_signal(std::istream &in) {
  std::vector<double> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view field = trim(line);
    if (field.empty())
      continue;
    double value = 0.0;
    const char *begin = field.data();
    const char *end = begin + field.size();
    if (*begin == '+')
      ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      throw ParseError("line " + std::to_string(lineno) + ": '" +
                       std::string(field) + "' is not a number");
    if (!std::isfinite(value))
      throw ParseError("line " + std::to_string(lineno) + ": non-finite sample");
    samples.push_back(value);
  }
  if (samples.empty())
    throw ParseError("signal contains no samples");
  return Eigen::Map<const Signal>(samples.data(),
                                  static_cast<Eigen::Index>(samples.size()));
}

Signal read_signal(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'");
  return parse_signal(in);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_signal(const Signal &x) {
  std::string text;
  text.reserve(static_cast<std::size_t>(x.size()) * 24);
  std::array<char, 64> buf{};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x(i),
                                         std::chars_format::general, 17);
    text.append(buf.data(), ptr);
    text.push_back('\n');
  }
  return text;
}

void write_signal(const std::filesystem::path &path, const Signal &x) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_signal(x);
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace cncfl
