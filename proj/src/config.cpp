#include "wstark/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace wstark {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a number");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw std::invalid_argument("config key '" + key + "': '" + v + "' is not an integer");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw std::invalid_argument("config key '" + key + "': '" + v +
                                    "' is not a nonnegative integer");
    return out;
}

std::string fmt(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

} // namespace

void RunConfig::validate() const {
    auto positive = [](double v, const char* key) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("config key '") + key + "' must be > 0");
    };
    if (!(lattice.V0 > 0.0)) throw std::invalid_argument("config key 'lattice.V0' must be > 0");
    if (!(lattice.F > 0.0)) throw std::invalid_argument("config key 'lattice.F' must be > 0");
    grid.validate(); // names its own keys via GridSpec messages
    positive(solver.leak_threshold, "solver.leak_threshold");
    positive(solver.residual_tol, "solver.residual_tol");
    positive(certification.gap_tol, "certification.gap_tol");
    positive(certification.s_tol, "certification.s_tol");
    positive(certification.k_tol, "certification.k_tol");
    positive(gpe.sc_tol, "gpe.sc_tol");
    if (!(gpe.relaxation > 0.0 && gpe.relaxation <= 1.0))
        throw std::invalid_argument("config key 'gpe.relaxation' must be in (0, 1]");
    if (gpe.max_iterations < 1)
        throw std::invalid_argument("config key 'gpe.max_iterations' must be >= 1");
    positive(shell_radius, "search.shell_radius");
    if (!(loop_continuity > 0.0 && loop_continuity < 1.0))
        throw std::invalid_argument("config key 'loop.continuity' must be in (0, 1)");
}

namespace {

/// Field table shared by the parser and serializer; one row per key.
struct Field {
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::map<std::string, Field> field_table() {
    std::map<std::string, Field> t;
    auto dbl = [&t](const std::string& key, auto access) {
        t[key] = {[access, key](RunConfig& c, const std::string& k, const std::string& v) {
                      access(c) = parse_double(k, v);
                  },
                  [access](const RunConfig& c) { return fmt(access(const_cast<RunConfig&>(c))); }};
    };
    auto integer = [&t](const std::string& key, auto access) {
        t[key] = {[access](RunConfig& c, const std::string& k, const std::string& v) {
                      access(c) = parse_int(k, v);
                  },
                  [access](const RunConfig& c) {
                      return std::to_string(access(const_cast<RunConfig&>(c)));
                  }};
    };

    dbl("lattice.V0", [](RunConfig& c) -> double& { return c.lattice.V0; });
    dbl("lattice.delta", [](RunConfig& c) -> double& { return c.lattice.delta; });
    dbl("lattice.phi", [](RunConfig& c) -> double& { return c.lattice.phi; });
    dbl("lattice.F", [](RunConfig& c) -> double& { return c.lattice.F; });
    dbl("lattice.g", [](RunConfig& c) -> double& { return c.lattice.g; });
    integer("grid.periods_left", [](RunConfig& c) -> int& { return c.grid.periods_left; });
    integer("grid.periods_right", [](RunConfig& c) -> int& { return c.grid.periods_right; });
    integer("grid.points_per_period",
            [](RunConfig& c) -> int& { return c.grid.points_per_period; });
    dbl("grid.cap_strength", [](RunConfig& c) -> double& { return c.grid.cap_strength; });
    integer("grid.cap_width", [](RunConfig& c) -> int& { return c.grid.cap_width; });
    integer("grid.cap_order", [](RunConfig& c) -> int& { return c.grid.cap_order; });
    t["grid.kinetic"] = {[](RunConfig& c, const std::string&, const std::string& v) {
                             c.grid.kinetic = kinetic_scheme_from_string(v);
                         },
                         [](const RunConfig& c) { return to_string(c.grid.kinetic); }};
    integer("solver.n_keep", [](RunConfig& c) -> int& { return c.solver.n_keep; });
    dbl("solver.leak_threshold", [](RunConfig& c) -> double& { return c.solver.leak_threshold; });
    dbl("solver.residual_tol", [](RunConfig& c) -> double& { return c.solver.residual_tol; });
    dbl("solver.band_energy_margin",
        [](RunConfig& c) -> double& { return c.solver.band_energy_margin; });
    dbl("solver.defective_tol", [](RunConfig& c) -> double& { return c.solver.defective_tol; });
    dbl("certification.gap_tol",
        [](RunConfig& c) -> double& { return c.certification.gap_tol; });
    dbl("certification.s_tol", [](RunConfig& c) -> double& { return c.certification.s_tol; });
    dbl("certification.k_tol", [](RunConfig& c) -> double& { return c.certification.k_tol; });
    dbl("gpe.relaxation", [](RunConfig& c) -> double& { return c.gpe.relaxation; });
    dbl("gpe.sc_tol", [](RunConfig& c) -> double& { return c.gpe.sc_tol; });
    integer("gpe.max_iterations", [](RunConfig& c) -> int& { return c.gpe.max_iterations; });
    dbl("gpe.identity_threshold",
        [](RunConfig& c) -> double& { return c.gpe.identity_threshold; });
    dbl("search.shell_radius", [](RunConfig& c) -> double& { return c.shell_radius; });
    dbl("loop.continuity", [](RunConfig& c) -> double& { return c.loop_continuity; });
    t["run.seed"] = {[](RunConfig& c, const std::string& k, const std::string& v) {
                         c.seed = parse_u64(k, v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }};
    t["run.output_dir"] = {[](RunConfig& c, const std::string&, const std::string& v) {
                               c.output_dir = v;
                           },
                           [](const RunConfig& c) { return c.output_dir; }};
    return t;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    const auto table = field_table();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        it->second.set(c, key, value);
    }
    c.validate();
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    for (const auto& [key, field] : field_table()) os << key << " = " << field.get(c) << "\n";
    return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

} // namespace wstark
