#pragma once

// CSV input/output: RFC 4180 quoting, '.' decimal separator, '#'-prefixed
// metadata lines before the header.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nvcav/errors.hpp"
#include "nvcav/experiments.hpp"
#include "nvcav/spectroscopy.hpp"

namespace nvcav::app {

class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& message) : Error("SchemaMismatch", message) {}
};

struct CsvTable {
    std::vector<std::string> metadata;  // comment lines without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name`; throws SchemaMismatch if absent.
    std::size_t column(const std::string& name) const;
    /// Parsed cell; empty cells read as NaN.
    double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, std::span<const std::string> cells);
std::string format_number(double value);

inline const std::vector<std::string> kSweepColumns = {
    "green_power_mW", "red_power_mW",   "f_amp",          "f_sp",
    "p_minus_excited", "p_zero_excited", "nv_minus_total", "nv_zero_total",
};

void write_metadata(std::ostream& out, std::span<const std::string> metadata);
void write_sweep_csv(std::ostream& out, std::span<const std::string> metadata,
                     std::span<const ObservablePoint> points);
/// Failed grid points get empty observable cells and a metadata line.
void write_grid_csv(std::ostream& out, std::span<const std::string> metadata,
                    const GridResult& grid);

/// Two columns, wavelength_nm and intensity.
void write_spectrum_csv(std::ostream& out, std::span<const std::string> metadata,
                        const Spectrum& spectrum);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

}  // namespace nvcav::app
