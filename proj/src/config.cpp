#include "kelsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kelsim {

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::MExp: return "m_exp";
        case SweepParam::Mu: return "mu";
        case SweepParam::Chi: return "chi";
        case SweepParam::CD: return "c_d";
    }
    return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
    if (name == "m_exp" || name == "m") return SweepParam::MExp;
    if (name == "mu") return SweepParam::Mu;
    if (name == "chi") return SweepParam::Chi;
    if (name == "c_d") return SweepParam::CD;
    throw ConfigError("unknown sweep parameter '" + std::string(name) + "' (expected m_exp, mu, chi or c_d)");
}

ModelParams with_param(ModelParams params, SweepParam which, double value) {
    switch (which) {
        case SweepParam::MExp: params.m_exp = value; break;
        case SweepParam::Mu: params.mu = value; break;
        case SweepParam::Chi: params.chi = value; break;
        case SweepParam::CD: params.c_d = value; break;
    }
    return params;
}

double get_param(const ModelParams& params, SweepParam which) {
    switch (which) {
        case SweepParam::MExp: return params.m_exp;
        case SweepParam::Mu: return params.mu;
        case SweepParam::Chi: return params.chi;
        case SweepParam::CD: return params.c_d;
    }
    return 0.0;
}

Grid Config::grid() const {
    const auto d = static_cast<std::size_t>(params.dim);
    if (params.dim != 1 && params.dim != 2)
        throw ConfigError("the simulator supports dim 1 or 2, got " + std::to_string(params.dim));
    return make_grid(params.dim, std::span<const std::size_t>(n_cells.data(), d),
                     std::span<const double>(lengths.data(), d));
}

State Config::initial_state() const {
    const Grid g = grid();
    State s;
    s.u = make_initial(g, u0);
    s.v = make_initial(g, v0);
    if (u0_mass) {
        const double m = diag::mass(s.u, g);
        if (!(m > 0.0)) throw ConfigError("u0_mass given but the initial density is identically zero");
        const double scale = *u0_mass / m;
        for (auto& x : s.u.values) x *= scale;
    }
    return s;
}

integ::RunOptions Config::run_options() const {
    integ::RunOptions o;
    o.record_every = record_every;
    o.extra_p = extra_p;
    return o;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s) {
    s = trim(s);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    if (!std::isfinite(x)) throw ConfigError("value must be finite");
    return x;
}

long long to_int(std::string_view s) {
    s = trim(s);
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected an integer, got '" + std::string(s) + "'");
    return x;
}

std::uint64_t to_u64(std::string_view s) {
    s = trim(s);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a nonnegative integer, got '" + std::string(s) + "'");
    return x;
}

std::vector<double> to_list(std::string_view s) {
    std::vector<double> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(to_double(s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

double positive(std::string_view s) {
    const double x = to_double(s);
    if (!(x > 0.0)) throw ConfigError("must be > 0");
    return x;
}

double nonneg(std::string_view s) {
    const double x = to_double(s);
    if (!(x >= 0.0)) throw ConfigError("must be >= 0");
    return x;
}

std::size_t to_cells(std::string_view s) {
    const long long n = to_int(s);
    if (n < 4) throw ConfigError("cell count must be >= 4");
    return static_cast<std::size_t>(n);
}

void require_increasing(const std::vector<double>& v) {
    if (v.empty()) throw ConfigError("sweep value list must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw ConfigError("sweep values must be strictly increasing");
}

}  // namespace

InitialData parse_initial(std::string_view text) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw ConfigError("initial data must look like kind(args), got '" + std::string(text) + "'");
    const auto kind = trim(text.substr(0, open));
    const auto args = to_list(text.substr(open + 1, text.size() - open - 2));
    InitialData out;
    if (kind == "constant") {
        if (args.size() != 1) throw ConfigError("constant(c) takes one argument");
        out = initial::Constant{args[0]};
    } else if (kind == "gaussian") {
        initial::Gaussian g;
        if (args.size() == 4) {
            g = {args[0], {args[1], args[2]}, args[3]};
        } else if (args.size() == 3) {
            g = {args[0], {args[1], 0.0}, args[2]};
        } else {
            throw ConfigError("gaussian takes (amplitude, cx, cy, width) or (amplitude, cx, width)");
        }
        out = g;
    } else if (kind == "noise") {
        if (args.size() != 3) throw ConfigError("noise(seed, amplitude, passes) takes three arguments");
        if (args[0] < 0.0 || args[0] != std::floor(args[0]) || args[2] != std::floor(args[2]))
            throw ConfigError("noise seed and passes must be integers");
        out = initial::FilteredNoise{static_cast<std::uint64_t>(args[0]), args[1], static_cast<int>(args[2])};
    } else {
        throw ConfigError("unknown initial data kind '" + std::string(kind) + "'");
    }
    validate(out);
    return out;
}

Config parse_config(std::string_view text) {
    Config c;
    bool have_ny = false;
    bool have_ly = false;
    std::optional<SweepParam> axis_name[2];
    std::optional<std::vector<double>> axis_values[2];

    using Setter = std::function<void(std::string_view)>;
    const std::map<std::string, Setter, std::less<>> keys = {
        {"dim", [&](auto v) {
             const long long d = to_int(v);
             if (d < 1 || d > 64) throw ConfigError("dim must be a positive integer");
             c.params.dim = static_cast<int>(d);
         }},
        {"nx", [&](auto v) { c.n_cells[0] = to_cells(v); }},
        {"ny", [&](auto v) { c.n_cells[1] = to_cells(v); have_ny = true; }},
        {"lx", [&](auto v) { c.lengths[0] = positive(v); }},
        {"ly", [&](auto v) { c.lengths[1] = positive(v); have_ly = true; }},
        {"chi", [&](auto v) { c.params.chi = positive(v); }},
        {"mu", [&](auto v) { c.params.mu = nonneg(v); }},
        {"c_d", [&](auto v) { c.params.c_d = positive(v); }},
        {"m", [&](auto v) { c.params.m_exp = to_double(v); }},
        {"m_exp", [&](auto v) { c.params.m_exp = to_double(v); }},
        {"lambda0", [&](auto v) { c.params.lambda0 = positive(v); }},
        {"c_gn", [&](auto v) { c.params.c_gn = positive(v); }},
        {"safety", [&](auto v) { c.control.safety = to_double(v); }},
        {"dt_min", [&](auto v) { c.control.dt_min = positive(v); }},
        {"dt_max", [&](auto v) { c.control.dt_max = positive(v); }},
        {"t_end", [&](auto v) { c.control.t_end = positive(v); }},
        {"blowup_factor", [&](auto v) { c.control.blowup_factor = positive(v); }},
        {"record_every", [&](auto v) { c.record_every = positive(v); }},
        {"lp", [&](auto v) { c.extra_p = to_list(v); }},
        {"u0", [&](auto v) { c.u0 = parse_initial(v); }},
        {"v0", [&](auto v) { c.v0 = parse_initial(v); }},
        {"u0_mass", [&](auto v) { c.u0_mass = positive(v); }},
        {"sweep_axis1", [&](auto v) { axis_name[0] = parse_sweep_param(trim(v)); }},
        {"sweep_axis2", [&](auto v) { axis_name[1] = parse_sweep_param(trim(v)); }},
        {"sweep_values1", [&](auto v) { axis_values[0] = to_list(v); }},
        {"sweep_values2", [&](auto v) { axis_values[1] = to_list(v); }},
        {"workers", [&](auto v) { c.workers = static_cast<int>(to_int(v)); }},
        {"plateau_window", [&](auto v) { c.plateau_window = to_double(v); }},
        {"plateau_ratio", [&](auto v) { c.plateau_ratio = to_double(v); }},
        {"theory_p", [&](auto v) { c.theory_p = to_list(v); }},
        {"gn_p", [&](auto v) { c.gn_p = to_double(v); }},
        {"gn_theta", [&](auto v) { c.gn_theta = to_double(v); }},
        {"gn_seed", [&](auto v) { c.gn_corpus.seed = to_u64(v); }},
        {"gn_constants", [&](auto v) { c.gn_corpus.constants = static_cast<int>(to_int(v)); }},
        {"gn_bumps", [&](auto v) { c.gn_corpus.bumps = static_cast<int>(to_int(v)); }},
        {"gn_noise", [&](auto v) { c.gn_corpus.noise = static_cast<int>(to_int(v)); }},
        {"gn_spikes", [&](auto v) { c.gn_corpus.spikes = static_cast<int>(to_int(v)); }},
        {"lambda0_gamma", [&](auto v) { c.lambda0_gamma = to_double(v); }},
        {"lambda0_trials", [&](auto v) { c.lambda0_trials = static_cast<int>(to_int(v)); }},
        {"lambda0_seed", [&](auto v) { c.lambda0_seed = to_u64(v); }},
        {"lambda0_horizon", [&](auto v) { c.lambda0_horizon = to_double(v); }},
    };

    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto at = [](std::size_t line, const std::string& msg) {
        return ConfigError("line " + std::to_string(line) + ": " + msg);
    };
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw at(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end()) throw at(line_no, "unknown key '" + std::string(key) + "'");
        if (auto prev = seen.find(key); prev != seen.end())
            throw at(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                  std::to_string(prev->second) + ")");
        seen.emplace(std::string(key), line_no);
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw at(line_no, std::string(key) + ": " + e.what());
        }
    }

    // Cross-field checks; the message names the line that set the key when known.
    auto line_of = [&](std::string_view key) {
        auto it = seen.find(key);
        return it == seen.end() ? std::string("default") : "line " + std::to_string(it->second);
    };
    auto check = [&](std::string_view key, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError(line_of(key) + ": " + e.what());
        }
    };

    if (!have_ny) c.n_cells[1] = c.n_cells[0];
    if (!have_ly) c.lengths[1] = c.lengths[0];
    c.params.validate();
    if (c.params.dim == 1 || c.params.dim == 2) check("nx", [&] { (void)c.grid(); });
    for (std::string_view k : {"safety", "dt_min", "dt_max", "t_end", "blowup_factor"})
        if (seen.contains(k)) check(k, [&] { c.control.validate(); });
    c.control.validate();
    check("record_every", [&] {
        if (!(c.record_every > 0.0)) throw ConfigError("record_every must be > 0");
    });
    check("lp", [&] {
        for (double p : c.extra_p)
            if (!(p >= 1.0)) throw ConfigError("lp exponents must be >= 1");
    });
    check("u0_mass", [&] {
        if (c.u0_mass && !(*c.u0_mass > 0.0)) throw ConfigError("u0_mass must be > 0");
    });
    check("workers", [&] {
        if (c.workers < 1) throw ConfigError("workers must be >= 1");
    });
    check("plateau_window", [&] {
        if (!(c.plateau_window > 0.0 && c.plateau_window <= 0.5))
            throw ConfigError("plateau_window must be in (0, 0.5]");
    });
    check("plateau_ratio", [&] {
        if (!(c.plateau_ratio >= 1.0)) throw ConfigError("plateau_ratio must be >= 1");
    });
    check("theory_p", [&] {
        for (double p : c.theory_p)
            if (!(p >= 1.0)) throw ConfigError("theory_p values must be >= 1");
    });
    check("lambda0_gamma", [&] {
        if (!(c.lambda0_gamma > 1.0)) throw ConfigError("lambda0_gamma must be > 1");
    });
    check("lambda0_trials", [&] {
        if (c.lambda0_trials < 1) throw ConfigError("lambda0_trials must be >= 1");
    });
    check("lambda0_horizon", [&] {
        if (!(c.lambda0_horizon > 0.0)) throw ConfigError("lambda0_horizon must be > 0");
    });

    for (int a = 0; a < 2; ++a) {
        const std::string name_key = "sweep_axis" + std::to_string(a + 1);
        const std::string values_key = "sweep_values" + std::to_string(a + 1);
        if (axis_name[a].has_value() != axis_values[a].has_value())
            throw ConfigError(line_of(axis_name[a] ? name_key : values_key) + ": " + name_key + " and " +
                              values_key + " must be given together");
        if (!axis_name[a]) continue;
        check(values_key, [&] {
            require_increasing(*axis_values[a]);
            for (double v : *axis_values[a]) (void)with_param(c.params, *axis_name[a], v).validate();
        });
        (a == 0 ? c.axis1 : c.axis2) = SweepAxis{*axis_name[a], *axis_values[a]};
    }
    if (c.axis2 && !c.axis1) throw ConfigError(line_of("sweep_axis2") + ": sweep_axis2 requires sweep_axis1");
    if (c.axis1 && c.axis2 && c.axis1->param == c.axis2->param)
        throw ConfigError(line_of("sweep_axis2") + ": sweep axes must name different parameters");
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace kelsim
