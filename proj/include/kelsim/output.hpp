#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kelsim/core.hpp"
#include "kelsim/integrator.hpp"

namespace kelsim::io {

/// Shortest text with 17 significant digits; parses back to the same double.
std::string format_double(double x);

/// Column label for an extra L^p norm, e.g. "l4_u", "l1.5_u".
std::string lp_label(double p);

/// Header t,dt,mass,linf_u,min_u,l2_u,<lp labels>,l2_v then one row per record.
std::string timeseries_csv(std::span<const diag::DiagnosticsRecord> records);

/// Writes timeseries_csv to path. Throws IoError on failure.
void emit_timeseries(const integ::RunOutcome& outcome, const std::filesystem::path& path);

/// Writes `text` to path with LF line endings as given. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Header ix,iy,value; one row per cell in index order.
std::string field_csv(const Field& f, const Grid& grid);
Field read_field_csv(const std::filesystem::path& path, const Grid& grid);

/**
 * 16-bit binary PGM (P5, maxval 65535, big-endian). Values map linearly
 * min -> 0, max -> 65535; the scale is recorded in a comment line. The first
 * image row is the top of the domain (largest y).
 */
std::string field_pgm(const Field& f, const Grid& grid);

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint16_t> samples;  ///< row-major, first row on top
    std::string comment;
};

PgmImage read_pgm(const std::filesystem::path& path);

struct SnapshotResult {
    std::filesystem::path csv;
    std::filesystem::path pgm;  ///< empty when skipped
    std::string notice;
};

/// Writes <stem>.csv and, on 2D grids, <stem>.pgm.
SnapshotResult emit_snapshot(const Field& f, const Grid& grid, const std::filesystem::path& stem);

}  // namespace kelsim::io
