#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace implicate {

/// Shortest round-trip decimal form, independent of the global locale.
/// NaN is written as "nan".
std::string format_double(double value);

/// Opens `path` for writing, creating parent directories; throws on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace implicate
