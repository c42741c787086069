#include "cswap/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cswap {

namespace pt = boost::property_tree;

bool operator==(const CircuitParams& a, const CircuitParams& b) { return a.as_array() == b.as_array(); }

bool operator==(const CostSpec& a, const CostSpec& b) {
    return a.w_j1 == b.w_j1 && a.w_branch == b.w_branch && a.w_ratio == b.w_ratio && a.w_anharm == b.w_anharm &&
           a.w_bounds == b.w_bounds && a.ratio_min == b.ratio_min && a.anharm_floor == b.anharm_floor;
}

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kind_names = {
    {ExperimentKind::fidelity_trace, "fidelity_trace"}, {ExperimentKind::scan_j2, "scan_j2"},
    {ExperimentKind::scan_j1, "scan_j1"},               {ExperimentKind::scan_delta, "scan_delta"},
    {ExperimentKind::qutrit_compare, "qutrit_compare"}, {ExperimentKind::crosstalk_scan, "crosstalk_scan"},
    {ExperimentKind::n5_trace, "n5_trace"},             {ExperimentKind::drive_demo, "drive_demo"},
    {ExperimentKind::circuit_map, "circuit_map"},       {ExperimentKind::search, "search"},
};

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    return v;
}

long long to_integer(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    long long v;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + s + "'");
}

std::string n5_name(N5Branch b) {
    switch (b) {
    case N5Branch::e0: return "e0";
    case N5Branch::eplus: return "eplus";
    case N5Branch::eminus: return "eminus";
    }
    return "?";
}

struct Field {
    const char* section;
    const char* key;
    std::function<void(ExperimentConfig&, const std::string& full, const std::string& v)> set;
    // Empty string = not written.
    std::function<std::string(const ExperimentConfig&)> get;
};

Field real(const char* sec, const char* key, double ExperimentConfig::*m) {
    return {sec, key, [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
            [m](const ExperimentConfig& c) { return fmt_double(c.*m); }};
}

Field integer(const char* sec, const char* key, int ExperimentConfig::*m) {
    return {sec, key,
            [m](ExperimentConfig& c, const std::string& k, const std::string& v) {
                long long x = to_integer(k, v);
                if (x < -(1LL << 31) || x >= (1LL << 31)) throw ConfigError("key '" + k + "': integer out of range");
                c.*m = static_cast<int>(x);
            },
            [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Field boolean(const char* sec, const char* key, bool ExperimentConfig::*m) {
    return {sec, key, [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_bool(k, v); },
            [m](const ExperimentConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field circuit_field(const char* key, int idx) {
    return {"circuit", key,
            [idx](ExperimentConfig& c, const std::string& k, const std::string& v) {
                auto a = c.circuit.as_array();
                a[idx] = to_double(k, v);
                c.circuit = CircuitParams::from_array(a);
            },
            [idx](const ExperimentConfig& c) { return fmt_double(c.circuit.as_array()[idx]); }};
}

Field cost_field(const char* key, double CostSpec::*m) {
    return {"search", key,
            [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.cost.*m = to_double(k, v); },
            [m](const ExperimentConfig& c) { return fmt_double(c.cost.*m); }};
}

template <class E>
Field enumerated(const char* sec, const char* key, E ExperimentConfig::*m, std::function<E(const std::string&)> parse,
                 std::function<std::string(E)> name) {
    return {sec, key,
            [m, parse](ExperimentConfig& c, const std::string& k, const std::string& v) {
                try {
                    c.*m = parse(v);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError("key '" + k + "': " + e.what());
                }
            },
            [m, name](const ExperimentConfig& c) { return name(c.*m); }};
}

const std::vector<Field>& fields() {
    using C = ExperimentConfig;
    static const std::vector<Field> f = [] {
        std::vector<Field> v;
        v.push_back(enumerated<ExperimentKind>("experiment", "kind", &C::kind, parse_kind,
                                               [](ExperimentKind k) { return to_string(k); }));
        v.push_back({"experiment", "seed",
                     [](C& c, const std::string& k, const std::string& s) {
                         long long x = to_integer(k, s);
                         if (x < 0) throw ConfigError("key '" + k + "': seed must be >= 0");
                         c.seed = static_cast<std::uint64_t>(x);
                     },
                     [](const C& c) { return std::to_string(c.seed); }});
        v.push_back(integer("experiment", "threads", &C::threads));

        v.push_back(enumerated<ModelSource>("model", "source", &C::source, parse_source,
                                            [](ModelSource s) { return to_string(s); }));
        v.push_back(integer("model", "row", &C::row));
        v.push_back(real("model", "j1x", &C::j1x));
        v.push_back(real("model", "j1z", &C::j1z));
        v.push_back(real("model", "j2x", &C::j2x));
        v.push_back(real("model", "j2z", &C::j2z));
        v.push_back({"model", "delta",
                     [](C& c, const std::string& k, const std::string& s) {
                         c.delta = to_double(k, s);
                         c.delta_from_branch = false;
                     },
                     [](const C& c) { return c.delta_from_branch ? std::string() : fmt_double(c.delta); }});
        v.push_back(enumerated<DeltaBranch>("model", "branch", &C::branch, parse_branch,
                                            [](DeltaBranch b) { return to_string(b); }));
        v.push_back(enumerated<ControlState>("model", "control", &C::control, parse_control,
                                             [](ControlState s) { return to_string(s); }));
        v.push_back(real("model", "target_offset", &C::target_offset));
        v.push_back(real("model", "omega2", &C::omega2));

        for (int i = 0; i < 8; ++i) v.push_back(circuit_field(CircuitParams::names()[i], i));

        v.push_back(real("noise", "gamma", &C::gamma));
        v.push_back(boolean("noise", "dephasing", &C::dephasing));
        v.push_back(boolean("noise", "loss", &C::loss));

        v.push_back(real("grid", "t_max", &C::t_max));
        v.push_back(integer("grid", "n_times", &C::n_times));
        v.push_back(real("grid", "x_min", &C::x_min));
        v.push_back(real("grid", "x_max", &C::x_max));
        v.push_back(integer("grid", "n_points", &C::n_points));

        v.push_back(real("n5", "delta3", &C::delta3));
        v.push_back(enumerated<N5Branch>("n5", "branch", &C::n5_branch, parse_n5_branch, n5_name));

        v.push_back(real("drive", "amplitude_ratio", &C::amplitude_ratio));
        v.push_back(real("drive", "phase", &C::drive_phase));
        v.push_back(real("drive", "pulse_fraction", &C::pulse_fraction));
        v.push_back(real("drive", "span", &C::drive_span));
        v.push_back(integer("drive", "samples", &C::drive_samples));

        v.push_back(integer("search", "n_restarts", &C::n_restarts));
        v.push_back(integer("search", "max_evaluations", &C::max_evaluations));
        v.push_back(cost_field("w_j1", &CostSpec::w_j1));
        v.push_back(cost_field("w_branch", &CostSpec::w_branch));
        v.push_back(cost_field("w_ratio", &CostSpec::w_ratio));
        v.push_back(cost_field("w_anharm", &CostSpec::w_anharm));
        v.push_back(cost_field("w_bounds", &CostSpec::w_bounds));
        v.push_back(cost_field("ratio_min", &CostSpec::ratio_min));
        v.push_back(cost_field("anharm_floor", &CostSpec::anharm_floor));
        return v;
    }();
    return f;
}

} // namespace

std::string to_string(ExperimentKind k) {
    for (auto& [e, n] : kind_names)
        if (e == k) return n;
    return "?";
}

ExperimentKind parse_kind(const std::string& s) {
    for (auto& [e, n] : kind_names)
        if (s == n) return e;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

std::string to_string(ModelSource s) {
    switch (s) {
    case ModelSource::explicit_params: return "explicit";
    case ModelSource::circuit: return "circuit";
    case ModelSource::table_row: return "table_row";
    }
    return "?";
}

ModelSource parse_source(const std::string& s) {
    if (s == "explicit") return ModelSource::explicit_params;
    if (s == "circuit") return ModelSource::circuit;
    if (s == "table_row") return ModelSource::table_row;
    throw std::invalid_argument("unknown model source '" + s + "'");
}

void ExperimentConfig::resolve() {
    if (threads < 1) throw ConfigError("experiment.threads must be >= 1");
    if (source == ModelSource::table_row) {
        if (row < 1 || row > static_cast<int>(table_s1().size()))
            throw ConfigError("model.row must be in 1.." + std::to_string(table_s1().size()));
        // The row fixes the detuning branch.
        branch = table_row(row).delta_plus() ? DeltaBranch::plus : DeltaBranch::minus;
    }
    if (source == ModelSource::circuit) {
        try {
            circuit.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("circuit: ") + e.what());
        }
    }
    if (!(gamma >= 0.0)) throw ConfigError("noise.gamma must be >= 0");
    if (!(t_max > 0.0)) throw ConfigError("grid.t_max must be positive");
    if (n_times < 2) throw ConfigError("grid.n_times must be >= 2");
    if (control == ControlState::custom) throw ConfigError("model.control = custom is not available from a config file");

    if (n_points == 0) {
        switch (kind) {
        case ExperimentKind::scan_j2: x_min = 2.0 * j1x, x_max = 40.0 * j1x, n_points = 12; break;
        case ExperimentKind::scan_j1: x_min = 10.0, x_max = 100.0, n_points = 10; break;
        case ExperimentKind::scan_delta: x_min = 0.0, x_max = 1200.0, n_points = 13; break;
        case ExperimentKind::crosstalk_scan: x_min = 0.0, x_max = 0.10, n_points = 11; break;
        default: n_points = 1; break;
        }
    }
    if (n_points < 1) throw ConfigError("grid.n_points must be >= 1");
    if (n_points > 1 && !(x_max > x_min)) throw ConfigError("grid.x_max must exceed grid.x_min");
    if (kind == ExperimentKind::scan_j2 && n_points > 1 &&
        (x_min < 2.0 * std::abs(j1x) - 1e-9 || x_max > 40.0 * std::abs(j1x) + 1e-9))
        throw ConfigError("scan_j2: grid must lie within [2, 40]·J1");
    if (kind == ExperimentKind::crosstalk_scan && (x_min < 0.0 || x_max > 0.10 + 1e-12))
        throw ConfigError("crosstalk_scan: J_c grid must lie within [0, 0.10]·J1");
    if (!(amplitude_ratio > 0.0)) throw ConfigError("drive.amplitude_ratio must be positive");
    if (!(pulse_fraction > 0.0)) throw ConfigError("drive.pulse_fraction must be positive");
    if (!(drive_span > 0.0)) throw ConfigError("drive.span must be positive");
    if (drive_samples < 1) throw ConfigError("drive.samples must be >= 1");
    if (n_restarts < 1 || max_evaluations < 1) throw ConfigError("search budget must be positive");
    try {
        cost.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("search: ") + e.what());
    }
}

ExperimentConfig parse_config(const std::string& text, bool resolve) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    std::set<std::string> known;
    for (const auto& f : fields()) known.insert(std::string(f.section) + "." + f.key);

    ExperimentConfig cfg;
    for (const auto& [sec, body] : tree) {
        if (!body.data().empty()) throw ConfigError("key '" + sec + "' outside any section");
        for (const auto& [key, val] : body) {
            std::string full = sec + "." + key;
            if (!known.count(full)) throw ConfigError("unknown key '" + full + "'");
        }
    }
    for (const auto& f : fields()) {
        auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(f.section) + "." + f.key, '.'));
        if (v) f.set(cfg, std::string(f.section) + "." + f.key, *v);
    }
    if (resolve) cfg.resolve();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, bool resolve) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return parse_config(ss.str(), resolve);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "# format_version = " << config_format_version << "\n";
    std::string section;
    for (const auto& f : fields()) {
        std::string v = f.get(cfg);
        if (v.empty()) continue;
        if (section != f.section) {
            section = f.section;
            out << "\n[" << section << "]\n";
        }
        out << f.key << " = " << v << "\n";
    }
    return out.str();
}

SpinModelParams resolve_model(const ExperimentConfig& cfg) {
    switch (cfg.source) {
    case ModelSource::table_row: {
        const TableRow& r = table_row(cfg.row);
        return gate_params(r.j1x, r.j1z, r.j2x, r.j2z, r.delta, cfg.target_offset);
    }
    case ModelSource::circuit: {
        SpinMapResult s = circuit_to_spin(cfg.circuit);
        return gate_params(s.j1x, s.j1z, s.j2x, s.j2z, s.delta, cfg.target_offset);
    }
    case ModelSource::explicit_params: {
        double d = cfg.delta_from_branch ? gate_detuning(cfg.j2x, cfg.j2z, cfg.branch) : cfg.delta;
        return gate_params(cfg.j1x, cfg.j1z, cfg.j2x, cfg.j2z, d, cfg.target_offset);
    }
    }
    throw ConfigError("unknown model source");
}

NoiseModel resolve_noise(const ExperimentConfig& cfg) {
    NoiseModel n;
    n.dephasing_rate = cfg.dephasing ? cfg.gamma : 0.0;
    n.loss_rate = cfg.loss ? cfg.gamma : 0.0;
    return n;
}

} // namespace cswap
