#include "nvcav/app/csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "nvcav/app/config.hpp"

namespace nvcav::app {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw SchemaMismatch("missing CSV column '" + name + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const auto& cells = rows.at(row);
    if (col >= cells.size()) throw SchemaMismatch("short CSV row " + std::to_string(row + 1));
    const auto& cell = cells[col];
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw SchemaMismatch("non-numeric CSV cell '" + cell + "'");
    }
}

namespace {

std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto start = line.find_first_not_of(' ', 1);
            table.metadata.push_back(start == std::string::npos ? "" : line.substr(start));
            continue;
        }
        if (!have_header) {
            table.header = split_record(line);
            have_header = true;
        } else {
            table.rows.push_back(split_record(line));
        }
    }
    if (!have_header) throw SchemaMismatch("CSV has no header row");
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_csv(in);
}

void write_csv_row(std::ostream& out, std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char ch : c) {
                if (ch == '"') out << '"';
                out << ch;
            }
            out << '"';
        } else {
            out << c;
        }
    }
    out << '\n';
}

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    return fmt::format("{:.12g}", value);
}

void write_metadata(std::ostream& out, std::span<const std::string> metadata) {
    for (const auto& line : metadata) out << "# " << line << '\n';
}

namespace {

std::vector<std::string> sweep_cells(const ObservablePoint& pt) {
    return {format_number(pt.green_power * 1e3), format_number(pt.red_power * 1e3),
            format_number(pt.f_amp),             format_number(pt.f_sp),
            format_number(pt.p_minus_excited),   format_number(pt.p_zero_excited),
            format_number(pt.nv_minus_total),    format_number(pt.nv_zero_total)};
}

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const std::string> metadata,
                     std::span<const ObservablePoint> points) {
    write_metadata(out, metadata);
    write_csv_row(out, kSweepColumns);
    for (const auto& pt : points) write_csv_row(out, sweep_cells(pt));
}

void write_grid_csv(std::ostream& out, std::span<const std::string> metadata,
                    const GridResult& grid) {
    write_metadata(out, metadata);
    for (const auto& row : grid.rows) {
        if (row.ok()) continue;
        out << "# failed point green_mW=" << format_number(row.green_power * 1e3)
            << " red_mW=" << format_number(row.red_power * 1e3) << " error=" << row.error_code
            << '\n';
    }
    write_csv_row(out, kSweepColumns);
    for (const auto& row : grid.rows) {
        if (row.ok()) {
            write_csv_row(out, sweep_cells(*row.point));
        } else {
            std::vector<std::string> cells(kSweepColumns.size());
            cells[0] = format_number(row.green_power * 1e3);
            cells[1] = format_number(row.red_power * 1e3);
            write_csv_row(out, cells);
        }
    }
}

void write_spectrum_csv(std::ostream& out, std::span<const std::string> metadata,
                        const Spectrum& spectrum) {
    write_metadata(out, metadata);
    const std::vector<std::string> header{"wavelength_nm", "intensity"};
    write_csv_row(out, header);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const std::vector<std::string> cells{format_number(spectrum.wavelengths()[i] * 1e9),
                                             format_number(spectrum.intensities()[i])};
        write_csv_row(out, cells);
    }
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    const auto table = read_csv_file(path);
    const auto wl_col = table.column("wavelength_nm");
    const auto in_col = table.column("intensity");
    if (table.rows.empty()) throw SchemaMismatch("spectrum CSV has no data rows");
    std::vector<double> wl, in;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        wl.push_back(table.number(r, wl_col) / 1e9);
        in.push_back(table.number(r, in_col));
    }
    try {
        return Spectrum(std::move(wl), std::move(in));
    } catch (const InvalidArgument& e) {
        throw SchemaMismatch(std::string("invalid spectrum: ") + e.what());
    }
}

}  // namespace nvcav::app
