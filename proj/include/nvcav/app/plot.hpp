#pragma once

#include <filesystem>
#include <string>

#include "nvcav/app/csv.hpp"

namespace nvcav::app {

enum class PlotKind {
    amplification,  // f_amp and f_sp against green power (sweep-green CSV)
    populations,    // excited and total charge-state fractions against green power
    red_dependence, // f_amp against green per red power, and against red power (sweep-grid CSV)
};

/// "amplification" | "populations" | "red"; throws SchemaMismatch otherwise.
PlotKind parse_plot_kind(const std::string& name);

/// Renders `table` as a two-panel SVG document. Output is a pure function of
/// the table contents. Throws SchemaMismatch when required columns are
/// missing or the table has no rows.
std::string render_plot(const CsvTable& table, PlotKind kind);

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind,
               const std::filesystem::path& svg_path);

}  // namespace nvcav::app
