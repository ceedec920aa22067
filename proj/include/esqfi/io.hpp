#pragma once

#include <string>

namespace esqfi {

/// Fixed 17-significant-digit rendering used by every CSV artifact.
std::string fmt17(double v);

/// Writes via a temporary file in the same directory plus rename, so a
/// partially written artifact never appears under the final name.
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace esqfi
