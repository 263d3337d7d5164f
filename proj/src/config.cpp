#include "torsk/config.hpp"

#include <fstream>
#include <sstream>

namespace torsk {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("invalid number '" + v + "' for " + where);
    }
}

long long parse_int(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (...) {
        throw ConfigError("invalid integer '" + v + "' for " + where);
    }
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean '" + v + "' for " + where);
}

// "RxC" size token, e.g. "30x30"
std::pair<int, int> parse_size(const std::string& v, const std::string& where) {
    auto x = v.find('x');
    if (x == std::string::npos)
        throw ConfigError("invalid size '" + v + "' for " + where + " (expected RxC)");
    return {static_cast<int>(parse_int(v.substr(0, x), where)),
            static_cast<int>(parse_int(v.substr(x + 1), where))};
}

// map = <kind> <size|-|x|y> <scale> [sigma=S] [seed=N] [axis=x|y]
InputMapSpec parse_map_line(const std::string& value) {
    const auto toks = split_ws(value);
    if (toks.size() < 3)
        throw ConfigError("input map entry '" + value + "' needs: kind size scale");
    InputMapSpec spec;
    const std::string& kind = toks[0];
    if (kind == "pixels") spec.kind = MapKind::Pixels;
    else if (kind == "gaussian_conv") spec.kind = MapKind::GaussianConv;
    else if (kind == "random_conv") spec.kind = MapKind::RandomConv;
    else if (kind == "dct") spec.kind = MapKind::DCT;
    else if (kind == "gradient") spec.kind = MapKind::Gradient;
    else if (kind == "random_matrix") spec.kind = MapKind::RandomMatrix;
    else throw ConfigError("unknown input map kind '" + kind + "'");

    if (spec.kind == MapKind::Gradient) {
        if (toks[1] == "x") spec.axis = 0;
        else if (toks[1] == "y") spec.axis = 1;
        else if (toks[1] != "-") {
            // size is ignored for gradients; accept and discard an RxC token
            parse_size(toks[1], "gradient size");
        }
    } else {
        auto [r, c] = parse_size(toks[1], "input map '" + kind + "'");
        spec.rows = r;
        spec.cols = c;
    }
    spec.scale = parse_double(toks[2], "input map scale");

    for (std::size_t i = 3; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed input map option '" + toks[i] + "'");
        const std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
        if (key == "sigma") spec.sigma = parse_double(val, "input map sigma");
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(val, "input map seed"));
        else if (key == "axis") {
            if (val == "x") spec.axis = 0;
            else if (val == "y") spec.axis = 1;
            else throw ConfigError("input map axis must be x or y, got '" + val + "'");
        } else throw ConfigError("unknown input map option '" + key + "'");
    }
    return spec;
}

// anomaly = <start> <length> <gamma>
AnomalySpec parse_anomaly_line(const std::string& value) {
    const auto toks = split_ws(value);
    if (toks.size() != 3)
        throw ConfigError("anomaly entry '" + value + "' needs: start length gamma");
    AnomalySpec a;
    a.start_step = parse_int(toks[0], "anomaly start");
    a.length_steps = parse_int(toks[1], "anomaly length");
    a.gamma_anomalous = parse_double(toks[2], "anomaly gamma");
    if (a.start_step < 0) throw ConfigError("anomaly start must be nonnegative");
    if (a.length_steps <= 0) throw ConfigError("anomaly length must be positive");
    return a;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    Rational r;
    if (slash == std::string::npos) {
        r.num = parse_int(trim(text), "rational");
        r.den = 1;
    } else {
        r.num = parse_int(trim(text.substr(0, slash)), "rational numerator");
        r.den = parse_int(trim(text.substr(slash + 1)), "rational denominator");
        if (r.den == 0) throw ConfigError("rational '" + text + "' has zero denominator");
    }
    return reduce(r);
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    RunConfig cfg;
    std::string section;
    std::string line;
    long long lineno = 0;
    bool stride_set = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"dataset", "input_maps", "reservoir", "solver",
                                          "imed",    "trend",      "window",    "normality",
                                          "output"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string where = "[" + section + "] " + key;

        if (section == "dataset") {
            if (key == "kind") cfg.dataset.kind = val;
            else if (key == "steps") cfg.dataset.steps = parse_int(val, where);
            else if (key == "seed") cfg.dataset.seed = static_cast<std::uint64_t>(parse_int(val, where));
            else if (key == "beta") cfg.dataset.mg.beta = parse_double(val, where);
            else if (key == "gamma") cfg.dataset.mg.gamma = parse_double(val, where);
            else if (key == "n") cfg.dataset.mg.n_exponent = parse_double(val, where);
            else if (key == "tau") cfg.dataset.mg.tau = parse_double(val, where);
            else if (key == "dt") cfg.dataset.mg.dt = parse_double(val, where);
            else if (key == "x0") cfg.dataset.mg.x0 = parse_double(val, where);
            else if (key == "anomaly") cfg.dataset.anomalies.push_back(parse_anomaly_line(val));
            else if (key == "rows") cfg.dataset.blob.rows = static_cast<int>(parse_int(val, where));
            else if (key == "cols") cfg.dataset.blob.cols = static_cast<int>(parse_int(val, where));
            else if (key == "blob_sigma") cfg.dataset.blob.blob_sigma = parse_double(val, where);
            else if (key == "alpha") cfg.dataset.blob.alpha = parse_double(val, where);
            else if (key == "beta_freq") cfg.dataset.blob.beta_freq = parse_double(val, where);
            else if (key == "blob_dt") cfg.dataset.blob.dt = parse_double(val, where);
            else throw ConfigError("unknown key '" + key + "' in section [dataset]");
        } else if (section == "input_maps") {
            if (key == "map") cfg.input_maps.push_back(parse_map_line(val));
            else throw ConfigError("unknown key '" + key + "' in section [input_maps]");
        } else if (section == "reservoir") {
            if (key == "rho") cfg.reservoir.spectral_radius = parse_double(val, where);
            else if (key == "sparsity") cfg.reservoir.sparsity = parse_double(val, where);
            else if (key == "bias_scale") cfg.reservoir.bias_scale = parse_double(val, where);
            else if (key == "seed") cfg.reservoir.seed = static_cast<std::uint64_t>(parse_int(val, where));
            else throw ConfigError("unknown key '" + key + "' in section [reservoir]");
        } else if (section == "solver") {
            if (key == "method") {
                if (val == "lstsq") cfg.solver.method = SolverMethod::Lstsq;
                else if (val == "tikhonov") cfg.solver.method = SolverMethod::Tikhonov;
                else if (val == "svd") cfg.solver.method = SolverMethod::SvdStable;
                else throw ConfigError("unknown solver method '" + val + "'");
            } else if (key == "beta") cfg.solver.beta = parse_double(val, where);
            else if (key == "rcond") cfg.solver.svd_rcond = parse_double(val, where);
            else throw ConfigError("unknown key '" + key + "' in section [solver]");
        } else if (section == "imed") {
            if (key == "enabled") cfg.imed.enabled = parse_bool(val, where);
            else if (key == "sigma") cfg.imed.sigma = parse_double(val, where);
            else throw ConfigError("unknown key '" + key + "' in section [imed]");
        } else if (section == "trend") {
            if (key == "degree") cfg.trend.degree = static_cast<int>(parse_int(val, where));
            else if (key == "cycle_length") cfg.trend.cycle_length = parse_rational(val);
            else if (key == "resample") cfg.trend.resample = parse_rational(val);
            else if (key == "dct_block") cfg.trend.dct_block = static_cast<int>(parse_int(val, where));
            else throw ConfigError("unknown key '" + key + "' in section [trend]");
        } else if (section == "window") {
            if (key == "l_trans") cfg.window.l_trans = parse_int(val, where);
            else if (key == "l_train") cfg.window.l_train = parse_int(val, where);
            else if (key == "l_pred") cfg.window.l_pred = parse_int(val, where);
            else if (key == "stride") { cfg.window.stride = parse_int(val, where); stride_set = true; }
            else throw ConfigError("unknown key '" + key + "' in section [window]");
        } else if (section == "normality") {
            if (key == "m") cfg.normality.m = parse_int(val, where);
            else if (key == "n") cfg.normality.n = parse_int(val, where);
            else if (key == "threshold") cfg.normality.threshold = parse_double(val, where);
            else throw ConfigError("unknown key '" + key + "' in section [normality]");
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = val;
            else throw ConfigError("unknown key '" + key + "' in section [output]");
        } else {
            throw ConfigError("key '" + key + "' appears before any section");
        }
    }

    // cross-field validation, before any computation runs
    if (cfg.reservoir.spectral_radius <= 0) throw ConfigError("[reservoir] rho must be positive");
    if (cfg.reservoir.sparsity < 0 || cfg.reservoir.sparsity >= 1)
        throw ConfigError("[reservoir] sparsity must lie in [0,1)");
    if (cfg.solver.beta < 0) throw ConfigError("[solver] beta must be nonnegative");
    if (cfg.solver.svd_rcond <= 0 || cfg.solver.svd_rcond >= 1)
        throw ConfigError("[solver] rcond must lie in (0,1)");
    if (cfg.imed.sigma <= 0) throw ConfigError("[imed] sigma must be positive");
    if (cfg.window.l_trans < 1 || cfg.window.l_train < 1 || cfg.window.l_pred < 1)
        throw ConfigError("[window] l_trans, l_train and l_pred must be positive");
    if (!stride_set) cfg.window.stride = cfg.window.l_pred;
    if (cfg.window.stride < 1) throw ConfigError("[window] stride must be >= 1");
    if (cfg.normality.m < 1 || cfg.normality.n < 1)
        throw ConfigError("[normality] m and n must be positive");
    if (2 * cfg.normality.n >= cfg.normality.m)
        throw ConfigError("[normality] n must satisfy n < m/2");
    if (cfg.normality.threshold <= 0 || cfg.normality.threshold >= 1)
        throw ConfigError("[normality] threshold must lie in (0,1)");
    if (cfg.trend.degree < 1 || cfg.trend.degree > 3)
        throw ConfigError("[trend] degree must be 1, 2 or 3");
    if (cfg.trend.dct_block < 1) throw ConfigError("[trend] dct_block must be positive");
    return cfg;
}

}  // namespace torsk
