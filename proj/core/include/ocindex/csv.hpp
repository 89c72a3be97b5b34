#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ocindex {

/// RFC-4180 field quoting, LF line endings.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads one record (handles quoted fields spanning lines); nullopt at EOF.
std::optional<std::vector<std::string>> read_csv_row(std::istream& in);

std::string csv_escape(const std::string& field);

}  // namespace ocindex
