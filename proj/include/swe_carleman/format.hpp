#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace swe {

/// Shortest round-trip decimal representation ("nan"/"inf" for non-finite).
std::string fmt_double(double v);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed writer never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace swe
