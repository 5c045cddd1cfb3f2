#include "kelsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kelsim::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string lp_label(double p) {
    if (std::isinf(p)) return "linf_u";
    char buf[40];
    std::snprintf(buf, sizeof buf, "l%g_u", p);
    return buf;
}

std::string timeseries_csv(std::span<const diag::DiagnosticsRecord> records) {
    std::string out = "t,dt,mass,linf_u,min_u,l2_u";
    if (!records.empty())
        for (const auto& [p, value] : records.front().lp_norms) out += "," + lp_label(p);
    out += ",l2_v\n";
    for (const auto& r : records) {
        out += format_double(r.t);
        for (double x : {r.dt, r.mass, r.linf_u, r.min_u, r.l2_u}) out += "," + format_double(x);
        for (const auto& [p, value] : r.lp_norms) out += "," + format_double(value);
        out += "," + format_double(r.l2_v) + "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void emit_timeseries(const integ::RunOutcome& outcome, const std::filesystem::path& path) {
    write_text(path, timeseries_csv(outcome.records));
}

std::string field_csv(const Field& f, const Grid& grid) {
    std::string out = "ix,iy,value\n";
    for (std::size_t iy = 0; iy < grid.cells(1); ++iy)
        for (std::size_t ix = 0; ix < grid.cells(0); ++ix)
            out += std::to_string(ix) + "," + std::to_string(iy) + "," + format_double(f[grid.index(ix, iy)]) + "\n";
    return out;
}

Field read_field_csv(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != "ix,iy,value") throw IoError("unexpected field CSV header");
    Field f(grid.cell_count(), 0.0);
    std::vector<bool> filled(grid.cell_count(), false);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw IoError("malformed field CSV row '" + line + "'");
        const auto ix = std::stoull(a);
        const auto iy = std::stoull(b);
        if (ix >= grid.cells(0) || iy >= grid.cells(1)) throw IoError("field CSV index out of range");
        const std::size_t i = grid.index(ix, iy);
        f[i] = std::strtod(c.c_str(), nullptr);
        filled[i] = true;
    }
    for (bool ok : filled)
        if (!ok) throw IoError("field CSV does not cover every cell");
    return f;
}

std::string field_pgm(const Field& f, const Grid& grid) {
    if (grid.dim() != 2) throw IoError("PGM output needs a 2D grid");
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    const double lo = f.min();
    const double hi = f.max();
    const double span = hi - lo;
    std::string out = "P5\n";
    if (span > 0.0) {
        out += "# scale linear min=" + format_double(lo) + " max=" + format_double(hi) + "\n";
    } else {
        out += "# scale degenerate min=max=" + format_double(lo) + "\n";
    }
    out += std::to_string(nx) + " " + std::to_string(ny) + "\n65535\n";
    out.reserve(out.size() + 2 * nx * ny);
    for (std::size_t row = 0; row < ny; ++row) {
        const std::size_t iy = ny - 1 - row;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = f[grid.index(ix, iy)];
            const double s = span > 0.0 ? std::round((x - lo) / span * 65535.0) : 0.0;
            const auto v = static_cast<std::uint16_t>(std::clamp(s, 0.0, 65535.0));
            out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xFF));
        }
    }
    return out;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    PgmImage img;
    std::string magic;
    in >> magic;
    if (magic != "P5") throw IoError("not a binary PGM");
    auto next_token = [&]() {
        std::string tok;
        while (in >> std::ws && in.peek() == '#') {
            std::string c;
            std::getline(in, c);
            if (img.comment.empty()) img.comment = c;
        }
        in >> tok;
        return tok;
    };
    img.width = std::stoull(next_token());
    img.height = std::stoull(next_token());
    const auto maxval = std::stoul(next_token());
    if (maxval != 65535) throw IoError("expected maxval 65535");
    in.get();
    img.samples.resize(img.width * img.height);
    for (auto& s : img.samples) {
        const int hi = in.get();
        const int lo = in.get();
        if (!in) throw IoError("truncated PGM data");
        s = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return img;
}

SnapshotResult emit_snapshot(const Field& f, const Grid& grid, const std::filesystem::path& stem) {
    SnapshotResult r;
    r.csv = stem;
    r.csv += ".csv";
    write_text(r.csv, field_csv(f, grid));
    if (grid.dim() == 2) {
        r.pgm = stem;
        r.pgm += ".pgm";
        write_text(r.pgm, field_pgm(f, grid));
    } else {
        r.notice = "1D grid: PGM skipped, CSV only";
    }
    return r;
}

}  // namespace kelsim::io
