// Output plumbing shared by the CLI and the campaign writer: deterministic
// number formatting and crash-safe file writes.
#pragma once

#include <string>
#include <vector>

namespace netmimo {

// Shortest decimal form that round-trips the double, '.' decimal separator,
// independent of locale.
std::string fmt_double(double value);

// Comma-joined row terminated with LF. Fields are written as-is; none of the
// values emitted here ever need quoting.
std::string csv_row(const std::vector<std::string>& fields);

// Writes through a temporary file in the target directory followed by a
// rename, creating parent directories as needed, so a reader never sees a
// partial file and a failed run leaves no output at all.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace netmimo
