#include "sweeplab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sweeplab/pinned.hpp"

namespace sweeplab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (...) {
    }
    throw ConfigError("expected a number, got '" + v + "'", line);
}

long long parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (...) {
    }
    throw ConfigError("expected an integer, got '" + v + "'", line);
}

std::vector<std::string> split_csv(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(v);
    while (std::getline(is, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
    std::vector<double> xs;
    for (const std::string& p : split_csv(v)) xs.push_back(parse_double(p, line));
    return xs;
}

FourierMode parse_mode(const std::string& v, int line) {
    const auto parts = split_csv(v);
    if (parts.size() != 4)
        throw ConfigError("mode needs 'amplitude, n1, n2, phase', got '" + v + "'", line);
    FourierMode m;
    m.amplitude = parse_double(parts[0], line);
    m.n1 = static_cast<int>(parse_int(parts[1], line));
    m.n2 = static_cast<int>(parse_int(parts[2], line));
    m.phase = parse_double(parts[3], line);
    if (m.n1 == 0 && m.n2 == 0) throw ConfigError("mode wavevector must be nonzero", line);
    return m;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    cfg.field = default_field_family();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
    ExperimentConfig cfg;
    std::string section;
    std::vector<std::vector<FourierMode>> components;
    std::vector<FourierMode> drift;
    bool in_drift = false;

    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section == "component") {
                components.emplace_back();
                in_drift = false;
            } else if (section == "drift") {
                in_drift = true;
            } else {
                in_drift = false;
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line);

        if (section == "component" || section == "drift") {
            if (key != "mode") throw ConfigError("only 'mode' lines allowed here", line);
            const FourierMode m = parse_mode(val, line);
            if (in_drift)
                drift.push_back(m);
            else
                components.back().push_back(m);
        } else if (section == "integrator") {
            if (key == "h")
                cfg.h = parse_double(val, line);
            else if (key == "substep_cap")
                cfg.substep_cap = parse_double(val, line);
            else
                throw ConfigError("unknown [integrator] key '" + key + "'", line);
        } else if (section == "sweep") {
            if (key == "T")
                cfg.sweep_T = parse_double(val, line);
            else if (key == "eta")
                cfg.eta = parse_double(val, line);
            else if (key == "window_hint")
                cfg.window_hint = parse_double(val, line);
            else if (key == "delta_max")
                cfg.delta_max = parse_double(val, line);
            else if (key == "vertex_budget")
                cfg.vertex_budget = static_cast<std::size_t>(parse_int(val, line));
            else
                throw ConfigError("unknown [sweep] key '" + key + "'", line);
        } else if (section == "shape") {
            if (key == "R")
                cfg.passage_radius = parse_double(val, line);
            else if (key == "m_directions")
                cfg.m_directions = static_cast<int>(parse_int(val, line));
            else if (key == "t_ladder")
                cfg.t_ladder = parse_double_list(val, line);
            else if (key == "n_per_t")
                cfg.n_per_t = static_cast<int>(parse_int(val, line));
            else if (key == "delta_max")
                cfg.shape_delta_max = parse_double(val, line);
            else
                throw ConfigError("unknown [shape] key '" + key + "'", line);
        } else if (section == "passage") {
            if (key == "d_list")
                cfg.d_list = parse_double_list(val, line);
            else if (key == "beta")
                cfg.beta = parse_double(val, line);
            else if (key == "n")
                cfg.passage_n = static_cast<int>(parse_int(val, line));
            else
                throw ConfigError("unknown [passage] key '" + key + "'", line);
        } else if (section == "lyapunov") {
            if (key == "T")
                cfg.lyap_T = parse_double(val, line);
            else
                throw ConfigError("unknown [lyapunov] key '" + key + "'", line);
        } else if (section == "clt") {
            if (key == "n")
                cfg.clt_n = static_cast<int>(parse_int(val, line));
            else if (key == "T")
                cfg.clt_T = parse_double(val, line);
            else
                throw ConfigError("unknown [clt] key '" + key + "'", line);
        } else if (section == "seeds") {
            if (key == "master_seed")
                cfg.master_seed = static_cast<std::uint64_t>(parse_int(val, line));
            else if (key == "realizations")
                cfg.realizations = static_cast<int>(parse_int(val, line));
            else
                throw ConfigError("unknown [seeds] key '" + key + "'", line);
        } else if (section == "output") {
            if (key == "directory")
                cfg.out_dir = val;
            else if (key == "formats") {
                cfg.write_csv = cfg.write_svg = cfg.write_json = false;
                for (const std::string& f : split_csv(val)) {
                    if (f == "csv")
                        cfg.write_csv = true;
                    else if (f == "svg")
                        cfg.write_svg = true;
                    else if (f == "json")
                        cfg.write_json = true;
                    else
                        throw ConfigError("unknown output format '" + f + "'", line);
                }
            } else
                throw ConfigError("unknown [output] key '" + key + "'", line);
        } else {
            throw ConfigError("unknown section [" + section + "]", line);
        }
    }

    if (!components.empty()) {
        StreamSpec spec;
        for (auto& modes : components) {
            if (modes.empty()) throw ConfigError("[component] block without mode lines", line);
            spec.add_component(std::move(modes));
        }
        spec.set_drift(std::move(drift));
        cfg.field = spec;
    } else {
        if (!drift.empty()) throw ConfigError("[drift] requires [component] blocks", line);
        cfg.field = default_field_family();
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path, 0);
    return parse(is);
}

double ExperimentConfig::step_displacement_bound() const {
    double sum_s = 0.0, sum_s2 = 0.0;
    for (std::size_t k = 0; k < field.num_components(); ++k) {
        const double s = field.velocity_sup_bound(k);
        sum_s += s;
        sum_s2 += s * s;
    }
    // E sum |dtheta_k| S_k + 4 sd, plus the deterministic drift leg.
    const double mean_term = std::sqrt(2.0 / 3.14159265358979323846) * sum_s;
    const double sd_term = std::sqrt((1.0 - 2.0 / 3.14159265358979323846) * sum_s2);
    return h * field.drift_sup_bound() + std::sqrt(h) * (mean_term + 4.0 * sd_term);
}

void ExperimentConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive", 0);
    };
    positive(h, "h");
    positive(substep_cap, "substep_cap");
    positive(sweep_T, "sweep T");
    positive(eta, "eta");
    positive(delta_max, "delta_max");
    positive(shape_delta_max, "shape delta_max");
    positive(passage_radius, "R");
    positive(clt_T, "clt T");
    positive(lyap_T, "lyapunov T");
    if (vertex_budget == 0) throw ConfigError("vertex_budget must be positive", 0);
    if (m_directions < 8) throw ConfigError("m_directions must be >= 8", 0);
    if (n_per_t < 20) throw ConfigError("n_per_t must be >= 20", 0);
    if (realizations < 1) throw ConfigError("realizations must be >= 1", 0);
    for (double t : t_ladder) positive(t, "t_ladder entry");
    for (std::size_t i = 0; i + 1 < t_ladder.size(); ++i)
        if (!(t_ladder[i] < t_ladder[i + 1]))
            throw ConfigError("t_ladder must be increasing", 0);
    if (field.num_components() < 2)
        throw ConfigError("field needs at least 2 stream components", 0);

    // The sweep rasterization relies on per-step displacement <= eta.
    const double bound = step_displacement_bound();
    if (bound > eta) {
        std::ostringstream os;
        os << "per-step displacement contract violated: bound " << bound << " > eta " << eta
           << " (reduce h or the field amplitudes)";
        throw ConfigError(os.str(), 0);
    }
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os.precision(17);
    auto dump_modes = [&os](const std::vector<FourierMode>& modes) {
        for (const FourierMode& m : modes)
            os << "mode = " << m.amplitude << ", " << m.n1 << ", " << m.n2 << ", " << m.phase
               << "\n";
    };
    for (std::size_t k = 0; k < field.num_components(); ++k) {
        os << "[component]\n";
        dump_modes(field.component(k));
    }
    if (field.has_drift()) {
        os << "[drift]\n";
        dump_modes(field.drift_modes());
    }
    os << "[integrator]\nh = " << h << "\nsubstep_cap = " << substep_cap << "\n";
    os << "[sweep]\nT = " << sweep_T << "\neta = " << eta << "\nwindow_hint = " << window_hint
       << "\ndelta_max = " << delta_max << "\nvertex_budget = " << vertex_budget << "\n";
    os << "[shape]\nR = " << passage_radius << "\nm_directions = " << m_directions
       << "\nt_ladder = ";
    for (std::size_t i = 0; i < t_ladder.size(); ++i)
        os << (i ? ", " : "") << t_ladder[i];
    os << "\nn_per_t = " << n_per_t << "\ndelta_max = " << shape_delta_max << "\n";
    os << "[passage]\nd_list = ";
    for (std::size_t i = 0; i < d_list.size(); ++i) os << (i ? ", " : "") << d_list[i];
    os << "\nbeta = " << beta << "\nn = " << passage_n << "\n";
    os << "[lyapunov]\nT = " << lyap_T << "\n";
    os << "[clt]\nn = " << clt_n << "\nT = " << clt_T << "\n";
    os << "[seeds]\nmaster_seed = " << master_seed << "\nrealizations = " << realizations << "\n";
    os << "[output]\ndirectory = " << out_dir << "\nformats = ";
    bool first = true;
    for (const char* f : {"csv", "svg", "json"}) {
        const bool on = (f == std::string("csv") && write_csv) ||
                        (f == std::string("svg") && write_svg) ||
                        (f == std::string("json") && write_json);
        if (on) {
            os << (first ? "" : ", ") << f;
            first = false;
        }
    }
    os << "\n";
    return os.str();
}

ShapeRunOptions ExperimentConfig::shape_options(unsigned jobs) const {
    ShapeRunOptions opts;
    opts.h = h;
    opts.substep_cap = substep_cap;
    opts.delta_max = shape_delta_max;
    opts.vertex_budget = vertex_budget;
    opts.norm_upper_guess = pinned::kNormUpperGuess;
    opts.jobs = jobs;
    return opts;
}

}  // namespace sweeplab
