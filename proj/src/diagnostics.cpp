#include "kelsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace kelsim::diag {

double stable_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

namespace {

// (sum |x|^p vol)^(1/p) for any p > 0; used for the theta < 1 quasi-norm too.
double power_norm(std::span<const double> xs, double p, double vol) {
    if (p == kInf) {
        double m = 0.0;
        for (double x : xs) m = std::max(m, std::abs(x));
        return m;
    }
    std::vector<double> terms(xs.size());
    if (p == 1.0) {
        for (std::size_t i = 0; i < xs.size(); ++i) terms[i] = std::abs(xs[i]);
        return stable_sum(terms) * vol;
    }
    if (p == 2.0) {
        for (std::size_t i = 0; i < xs.size(); ++i) terms[i] = xs[i] * xs[i];
        return std::sqrt(stable_sum(terms) * vol);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) terms[i] = std::pow(std::abs(xs[i]), p);
    return std::pow(stable_sum(terms) * vol, 1.0 / p);
}

// Face differences (u_j - u_i)/h along every axis, concatenated.
std::vector<double> face_gradients(const Field& f, const Grid& grid) {
    std::vector<double> g;
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    g.reserve(2 * f.size());
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix + 1 < nx; ++ix)
            g.push_back((f[grid.index(ix + 1, iy)] - f[grid.index(ix, iy)]) / grid.spacing(0));
    if (grid.dim() == 2) {
        for (std::size_t iy = 0; iy + 1 < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix)
                g.push_back((f[grid.index(ix, iy + 1)] - f[grid.index(ix, iy)]) / grid.spacing(1));
    }
    return g;
}

// Pure second differences per axis with reflected ghosts, concatenated.
std::vector<double> second_differences(const Field& f, const Grid& grid) {
    std::vector<double> d;
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    d.reserve(2 * f.size());
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const double ih2 = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
        for (std::size_t iy = 0; iy < ny; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double c = f[grid.index(ix, iy)];
                double lo = c;
                double hi = c;
                if (axis == 0) {
                    if (ix > 0) lo = f[grid.index(ix - 1, iy)];
                    if (ix + 1 < nx) hi = f[grid.index(ix + 1, iy)];
                } else {
                    if (iy > 0) lo = f[grid.index(ix, iy - 1)];
                    if (iy + 1 < ny) hi = f[grid.index(ix, iy + 1)];
                }
                d.push_back((lo - 2.0 * c + hi) * ih2);
            }
        }
    }
    return d;
}

}  // namespace

double lp_norm(const Field& f, double p, const Grid& grid) {
    if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
    if (!f.all_finite()) throw NumericError("lp_norm: non-finite field");
    return power_norm(f.values, p, grid.cell_volume());
}

double mass(const Field& f, const Grid& grid) { return stable_sum(f.values) * grid.cell_volume(); }

double grad_l2(const Field& f, const Grid& grid) {
    return power_norm(face_gradients(f, grid), 2.0, grid.cell_volume());
}

DiagnosticsRecord make_record(const State& s, const Grid& grid, std::span<const double> extra_p) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.dt = s.last_dt;
    r.mass = mass(s.u, grid);
    r.linf_u = s.u.max();
    r.min_u = s.u.min();
    r.l2_u = lp_norm(s.u, 2.0, grid);
    r.l2_v = lp_norm(s.v, 2.0, grid);
    for (double p : extra_p) r.lp_norms.emplace_back(p, lp_norm(s.u, p, grid));
    return r;
}

double window_width(double horizon) { return std::min(1.0, horizon / 6.0); }

std::vector<WindowValue> u2_window_integral(std::span<const DiagnosticsRecord> records, double tau) {
    if (!(tau > 0.0)) throw DomainError("window width must be > 0");
    for (std::size_t k = 1; k < records.size(); ++k)
        if (records[k].t < records[k - 1].t) throw PreconditionError("records must be sorted by time");

    std::vector<WindowValue> out;
    if (records.empty()) return out;
    auto sq = [&](std::size_t k) { return records[k].l2_u * records[k].l2_u; };
    const double t_last = records.back().t;

    // Prefix trapezoid integral of |u|_2^2 at every record time.
    std::vector<double> prefix(records.size(), 0.0);
    for (std::size_t k = 1; k < records.size(); ++k)
        prefix[k] = prefix[k - 1] + 0.5 * (records[k].t - records[k - 1].t) * (sq(k) + sq(k - 1));

    auto integral_to = [&](double t) {
        auto it = std::upper_bound(records.begin(), records.end(), t,
                                   [](double x, const DiagnosticsRecord& r) { return x < r.t; });
        std::size_t k = static_cast<std::size_t>(it - records.begin());
        if (k == 0) return 0.0;
        --k;
        if (k + 1 >= records.size()) return prefix[k];
        const double t0 = records[k].t;
        const double t1 = records[k + 1].t;
        const double s = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
        const double f_t = sq(k) + s * (sq(k + 1) - sq(k));
        return prefix[k] + 0.5 * (t - t0) * (sq(k) + f_t);
    };

    out.reserve(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        const double t0 = records[k].t;
        const double t1 = t0 + tau;
        const bool truncated = t1 > t_last;
        const double end = truncated ? t_last : t1;
        out.push_back({t0, integral_to(end) - prefix[k], truncated});
    }
    return out;
}

double gn_exponent(int dim, double p, double theta) {
    const double n = dim;
    return (n / theta - n / p) / (1.0 - n / 2.0 + n / theta);
}

double gn_ratio(const Field& f, double p, double theta, const Grid& grid) {
    if (!(theta > 0.0) || !(theta < p)) throw DomainError("gn_ratio requires 0 < theta < p");
    const double a = gn_exponent(grid.dim(), p, theta);
    if (!(a > 0.0 && a < 1.0)) throw DomainError("gn_ratio: exponent a is not in (0, 1)");
    if (!f.all_finite()) throw NumericError("gn_ratio: non-finite field");
    const double vol = grid.cell_volume();
    const double num = power_norm(f.values, p, vol);
    const double low = power_norm(f.values, theta, vol);
    const double grad = power_norm(face_gradients(f, grid), 2.0, vol);
    const double den = std::pow(grad, a) * std::pow(low, 1.0 - a) + low;
    if (!(den > 0.0)) throw DegenerateError("gn_ratio: zero denominator (field vanishes)");
    return num / den;
}

double w2_norm(const Field& f, double gamma, const Grid& grid) {
    const double vol = grid.cell_volume();
    return power_norm(f.values, gamma, vol) + power_norm(face_gradients(f, grid), gamma, vol) +
           power_norm(second_differences(f, grid), gamma, vol);
}

}  // namespace kelsim::diag
