#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include "fracpme/analysis.hpp"
#include "fracpme/scheme.hpp"

namespace fracpme {

/// 17 significant digits, so every value round-trips exactly.
std::string format_number(double value);

/// "# t=..", "# dx=..", then "x_i<TAB>u_i" for i = 0..I.
void write_snapshot(std::ostream& os, const Snapshot& snapshot, const GridSpec& grid);
/// "x_i<TAB>y_k<TAB>w_ik" in storage order.
void write_field(std::ostream& os, const Field& field, double time);
/// Header "dx dt nodes error order"; the order column is blank on the first row.
void write_error_table(std::ostream& os, const ErrorTable& table);
void write_property_report(std::ostream& os, const PropertyReport& report);

/// Writes every snapshot of a run into `dir` (snapshot_<j>.tsv, field_<j>.tsv).
void write_run(const std::filesystem::path& dir, const RunResult& result, const GridSpec& grid);

/// Opens `path` for writing and hands the stream to `body`; IoError on failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace fracpme
