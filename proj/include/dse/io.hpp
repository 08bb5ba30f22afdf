#pragma once

#include <string>

namespace dse {

// Writes `contents` to `path` via a sibling temp file and rename, so readers
// never observe a partial file. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

} // namespace dse
