#pragma once

#include <string>
#include <vector>

namespace glmpss {

// Not-available token used in every CSV this project writes.
inline constexpr const char* kNaToken = "NA";

struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // trimmed cells
};

// Comma-separated table: one header line, then data rows. Lines starting
// with '#' and blank lines are skipped. Ragged rows raise IngestError naming
// the 1-based data row.
RawTable read_csv(const std::string& path);

// Index of a named column; IngestError listing the available columns if absent.
int column_index(const RawTable& table, const std::string& name);

// The named column parsed as doubles; a malformed cell raises IngestError
// naming the 1-based data row and the column.
std::vector<double> numeric_column(const RawTable& table,
                                   const std::string& name);

// Shortest representation that round-trips the double exactly.
std::string format_full(double v);

// 6 significant digits, for human-facing output.
std::string format_human(double v);

// Write content to path via a temp file in the same directory plus rename,
// so readers never observe a partially written file.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace glmpss
