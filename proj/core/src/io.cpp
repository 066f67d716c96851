#include "implicate/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "implicate/error.hpp"

namespace implicate {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error(Errc::invalid_argument, "number formatting failed");
  return std::string(buf.data(), end);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace implicate
