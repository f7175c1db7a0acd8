#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace savsim {

// Writes through a sibling temporary file and renames it into place, so a
// failed write never leaves a partial file at `path`. Throws io errors.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace savsim
