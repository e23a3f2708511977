#include "fvlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fvlab/errors.hpp"

namespace fvlab {

std::string experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Tightness: return "tightness";
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::NonExplosion: return "nonexplosion";
        case ExperimentKind::Compliance: return "compliance";
        case ExperimentKind::Hypothesis: return "hypothesis";
        case ExperimentKind::Qsd: return "qsd";
    }
    return "?";
}

namespace {

struct RawValue {
    std::string value;
    int line = 0;
    bool used = false;
};

using RawMap = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// Collects key = value lines; '#' starts a comment.
RawMap tokenize(const std::string& text, std::vector<std::string>& errors) {
    RawMap map;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (map.count(key))
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        map[key] = {value, lineno, false};
    }
    return map;
}

class Reader {
  public:
    Reader(RawMap& map, std::vector<std::string>& errors) : map_(map), errors_(errors) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::optional<std::string> str(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> num(const std::string& key) {
        auto s = str(key);
        if (!s) return std::nullopt;
        try {
            size_t pos = 0;
            const double v = std::stod(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + *s + "'");
            return std::nullopt;
        }
    }

    std::optional<long> integer(const std::string& key) {
        auto v = num(key);
        if (!v) return std::nullopt;
        const long n = std::lround(*v);
        if (*v != static_cast<double>(n)) {
            fail(key, "expected an integer");
            return std::nullopt;
        }
        return n;
    }

    std::optional<uint64_t> u64(const std::string& key) {
        auto s = str(key);
        if (!s) return std::nullopt;
        try {
            size_t pos = 0;
            const uint64_t v = std::stoull(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            fail(key, "expected an unsigned integer, got '" + *s + "'");
            return std::nullopt;
        }
    }

    std::optional<bool> flag(const std::string& key) {
        auto s = str(key);
        if (!s) return std::nullopt;
        if (*s == "on" || *s == "true" || *s == "1") return true;
        if (*s == "off" || *s == "false" || *s == "0") return false;
        fail(key, "expected on/off");
        return std::nullopt;
    }

    std::optional<std::vector<double>> num_list(const std::string& key) {
        auto s = str(key);
        if (!s) return std::nullopt;
        std::vector<double> out;
        for (const auto& tok : split_ws(*s)) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                fail(key, "expected numbers, got '" + tok + "'");
                return std::nullopt;
            }
        }
        return out;
    }

    void fail(const std::string& key, const std::string& msg) {
        auto it = map_.find(key);
        const std::string loc =
            it == map_.end() ? key : key + " (line " + std::to_string(it->second.line) + ")";
        errors_.push_back(loc + ": " + msg);
    }

    void report_unknown() {
        for (const auto& [key, raw] : map_)
            if (!raw.used)
                errors_.push_back("line " + std::to_string(raw.line) + ": unknown key '" +
                                  key + "'");
    }

  private:
    RawMap& map_;
    std::vector<std::string>& errors_;
};

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
    std::string out;
    for (double v : vs) {
        if (!out.empty()) out += " ";
        out += fmt_num(v);
    }
    return out;
}

}  // namespace

SystemConfig ExperimentConfig::system_config(int n) const {
    SystemConfig cfg;
    cfg.n = n;
    cfg.dt = dt;
    cfg.init = init;
    cfg.step_options.bridge_correction = bridge;
    cfg.explosion_cap_multiplier = cap_multiplier;
    return cfg;
}

JumpPolicy ExperimentConfig::make_policy() const {
    if (policy == "fleming_viot") return JumpPolicy::fleming_viot();
    if (policy == "weighted_phi")
        return JumpPolicy::weighted_donor([](double u) { return u; });
    if (policy == "uniform_teleport") return JumpPolicy::uniform_teleport();
    throw ConfigError("unknown policy: " + policy);
}

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    RawMap raw = tokenize(text, errors);
    Reader rd(raw, errors);
    ExperimentConfig cfg;

    if (auto v = rd.integer("schema")) cfg.schema = static_cast<int>(*v);
    if (cfg.schema != 1) errors.push_back("schema: only version 1 is supported");

    if (auto v = rd.str("experiment")) {
        const std::string& s = *v;
        if (s == "tightness") cfg.kind = ExperimentKind::Tightness;
        else if (s == "convergence") cfg.kind = ExperimentKind::Convergence;
        else if (s == "nonexplosion") cfg.kind = ExperimentKind::NonExplosion;
        else if (s == "compliance") cfg.kind = ExperimentKind::Compliance;
        else if (s == "hypothesis") cfg.kind = ExperimentKind::Hypothesis;
        else if (s == "qsd") cfg.kind = ExperimentKind::Qsd;
        else rd.fail("experiment", "unknown experiment '" + s + "'");
    } else {
        errors.push_back("experiment: required key missing");
    }

    // Domain: "interval a b" | "box lo... hi..." | "ball center... r"
    if (auto v = rd.str("domain")) {
        const auto toks = split_ws(*v);
        try {
            if (toks.empty()) throw ConfigError("empty domain spec");
            std::vector<double> ps;
            for (size_t k = 1; k < toks.size(); ++k) ps.push_back(std::stod(toks[k]));
            if (toks[0] == "interval" && ps.size() == 2) {
                cfg.domain = Domain::interval(ps[0], ps[1]);
            } else if (toks[0] == "box" && ps.size() >= 2 && ps.size() % 2 == 0) {
                const size_t d = ps.size() / 2;
                cfg.domain = Domain::box(Vec(ps.begin(), ps.begin() + d),
                                         Vec(ps.begin() + d, ps.end()));
            } else if (toks[0] == "ball" && ps.size() >= 2) {
                cfg.domain = Domain::ball(Vec(ps.begin(), ps.end() - 1), ps.back());
            } else {
                throw ConfigError("expected 'interval a b', 'box lo.. hi..' or 'ball c.. r'");
            }
        } catch (const std::exception& ex) {
            rd.fail("domain", ex.what());
        }
    } else {
        errors.push_back("domain: required key missing");
    }

    if (auto v = rd.str("model")) cfg.model.name = *v;
    else errors.push_back("model: required key missing");
    if (auto v = rd.num("model.sigma")) cfg.model.sigma = *v;
    if (auto v = rd.num("model.kappa")) cfg.model.kappa = *v;
    if (auto v = rd.num_list("model.drift")) cfg.model.drift = *v;
    if (auto v = rd.num("model.omega")) cfg.model.omega = *v;
    if (auto v = rd.num("model.theta")) cfg.model.theta = *v;
    if (auto v = rd.num("model.env_sigma")) cfg.model.env_sigma = *v;
    if (auto v = rd.num_list("model.env_coupling")) cfg.model.env_coupling = *v;
    if (auto v = rd.num("model.env_init")) cfg.model.env_init = *v;
    if (auto v = rd.num("model.env_halfwidth")) cfg.model.env_halfwidth = *v;

    if (auto v = rd.num("bounds.a0")) cfg.model.bounds.a0 = *v;
    if (auto v = rd.num("bounds.A")) cfg.model.bounds.A = *v;
    if (auto v = rd.num("bounds.c0")) cfg.model.bounds.c0 = *v;
    if (auto v = rd.num("bounds.C0")) cfg.model.bounds.C0 = *v;
    if (auto v = rd.num("bounds.kg")) cfg.model.bounds.k_g = *v;

    if (auto v = rd.str("policy")) cfg.policy = *v;
    if (cfg.policy != "fleming_viot" && cfg.policy != "weighted_phi" &&
        cfg.policy != "uniform_teleport")
        rd.fail("policy", "unknown policy '" + cfg.policy + "'");

    if (auto v = rd.str("init")) {
        const auto toks = split_ws(*v);
        try {
            if (toks.empty()) throw ConfigError("empty init spec");
            if (toks[0] == "uniform" && toks.size() == 1) {
                cfg.init = InitSpec::uniform();
            } else if (toks[0] == "point" && toks.size() >= 2) {
                Vec x;
                for (size_t k = 1; k < toks.size(); ++k) x.push_back(std::stod(toks[k]));
                cfg.init = InitSpec::point(std::move(x));
            } else if (toks[0] == "boundary_offset" &&
                       (toks.size() == 2 || toks.size() == 3)) {
                const double delta = std::stod(toks[1]);
                const int face = toks.size() == 3 ? std::stoi(toks[2]) : 0;
                cfg.init = InitSpec::boundary_offset(delta, face);
            } else {
                throw ConfigError("expected 'uniform', 'point x..' or 'boundary_offset d [face]'");
            }
        } catch (const std::exception& ex) {
            rd.fail("init", ex.what());
        }
    }

    if (auto v = rd.num_list("N")) {
        for (double d : *v) {
            const int n = static_cast<int>(std::lround(d));
            if (n < 2) rd.fail("N", "particle counts must be >= 2");
            cfg.n_values.push_back(n);
        }
    }
    if (auto v = rd.num("dt")) cfg.dt = *v;
    if (!(cfg.dt > 0.0)) rd.fail("dt", "must be > 0");
    if (auto v = rd.num("t0")) cfg.t0 = *v;
    if (auto v = rd.num_list("T")) cfg.horizons = *v;
    if (auto v = rd.num_list("a")) cfg.a_values = *v;
    if (auto v = rd.num("gamma")) cfg.gamma = *v;
    if (auto v = rd.integer("replicas")) cfg.replicas = static_cast<int>(*v);
    if (auto v = rd.integer("M")) cfg.attempts = *v;
    if (auto v = rd.str("out")) cfg.out_dir = *v;
    if (auto v = rd.num("explosion_cap_multiplier")) cfg.cap_multiplier = *v;
    if (auto v = rd.flag("bridge")) cfg.bridge = *v;
    if (auto v = rd.num("epsilon")) cfg.epsilon = *v;
    if (auto v = rd.integer("N_eps")) cfg.n_eps = static_cast<int>(*v);
    if (auto v = rd.num("a_ref")) cfg.a_ref = *v;
    if (auto v = rd.num("oracle_abs")) cfg.oracle_abs = *v;
    if (auto v = rd.num("ks_threshold")) cfg.ks_threshold = *v;
    if (auto v = rd.flag("expect_compliant")) cfg.expect_compliant = *v;
    if (auto v = rd.integer("trials")) cfg.trials = static_cast<int>(*v);
    if (auto v = rd.integer("samples")) cfg.samples = static_cast<int>(*v);
    if (auto v = rd.num("t_max")) cfg.t_max = *v;
    if (auto v = rd.integer("grid_n")) cfg.grid_n = static_cast<int>(*v);
    if (auto v = rd.integer("pair_i")) cfg.pair_i = static_cast<int>(*v);
    if (auto v = rd.integer("pair_j")) cfg.pair_j = static_cast<int>(*v);

    if (auto v = rd.u64("seed")) cfg.seed = *v;
    else errors.push_back("seed: required key missing (runs must be reproducible)");

    rd.report_unknown();

    // Cross-field checks per experiment.
    const bool needs_system = cfg.kind == ExperimentKind::Tightness ||
                              cfg.kind == ExperimentKind::Convergence ||
                              cfg.kind == ExperimentKind::NonExplosion ||
                              cfg.kind == ExperimentKind::Qsd;
    if (needs_system && cfg.n_values.empty())
        errors.push_back("N: required for this experiment");
    if (needs_system && cfg.horizons.empty())
        errors.push_back("T: required for this experiment");
    if (cfg.kind == ExperimentKind::Tightness) {
        if (!(cfg.t0 > 0.0)) errors.push_back("t0: must be > 0");
        for (double T : cfg.horizons)
            if (T < cfg.t0)
                errors.push_back("T: horizon " + fmt_num(T) +
                                 " violates T >= t0 = " + fmt_num(cfg.t0));
        if (cfg.a_values.empty()) errors.push_back("a: required for tightness");
        if (cfg.replicas < 2) errors.push_back("replicas: must be >= 2");
    }
    try {
        cfg.model.bounds.validate();
    } catch (const ConfigError& ex) {
        errors.insert(errors.end(), ex.violations.begin(), ex.violations.end());
    }

    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "schema = 1\n";
    os << "experiment = " << experiment_name(kind) << "\n";
    os << "domain = " << domain.describe() << "\n";
    os << "model = " << model.name << "\n";
    os << "model.sigma = " << fmt_num(model.sigma) << "\n";
    os << "model.kappa = " << fmt_num(model.kappa) << "\n";
    if (!model.drift.empty()) os << "model.drift = " << fmt_list(model.drift) << "\n";
    if (model.name == "bm_sin_drift") os << "model.omega = " << fmt_num(model.omega) << "\n";
    if (model.name == "ou_env") {
        os << "model.theta = " << fmt_num(model.theta) << "\n";
        os << "model.env_sigma = " << fmt_num(model.env_sigma) << "\n";
        os << "model.env_coupling = " << fmt_list(model.env_coupling) << "\n";
        os << "model.env_init = " << fmt_num(model.env_init) << "\n";
        os << "model.env_halfwidth = " << fmt_num(model.env_halfwidth) << "\n";
    }
    os << "bounds.a0 = " << fmt_num(model.bounds.a0) << "\n";
    os << "bounds.A = " << fmt_num(model.bounds.A) << "\n";
    os << "bounds.c0 = " << fmt_num(model.bounds.c0) << "\n";
    os << "bounds.C0 = " << fmt_num(model.bounds.C0) << "\n";
    os << "bounds.kg = " << fmt_num(model.bounds.k_g) << "\n";
    os << "policy = " << policy << "\n";
    switch (init.kind) {
        case InitSpec::Kind::Uniform:
            os << "init = uniform\n";
            break;
        case InitSpec::Kind::Point:
            os << "init = point";
            for (double x : init.x0) os << " " << fmt_num(x);
            os << "\n";
            break;
        case InitSpec::Kind::BoundaryOffset:
            os << "init = boundary_offset " << fmt_num(init.delta) << " " << init.face
               << "\n";
            break;
    }
    if (!n_values.empty()) {
        os << "N =";
        for (int n : n_values) os << " " << n;
        os << "\n";
    }
    os << "dt = " << fmt_num(dt) << "\n";
    os << "t0 = " << fmt_num(t0) << "\n";
    if (!horizons.empty()) os << "T = " << fmt_list(horizons) << "\n";
    if (!a_values.empty()) os << "a = " << fmt_list(a_values) << "\n";
    os << "gamma = " << fmt_num(gamma) << "\n";
    os << "replicas = " << replicas << "\n";
    os << "M = " << attempts << "\n";
    os << "seed = " << seed << "\n";
    os << "explosion_cap_multiplier = " << fmt_num(cap_multiplier) << "\n";
    os << "bridge = " << (bridge ? "on" : "off") << "\n";
    os << "epsilon = " << fmt_num(epsilon) << "\n";
    os << "N_eps = " << n_eps << "\n";
    os << "a_ref = " << fmt_num(a_ref) << "\n";
    os << "oracle_abs = " << fmt_num(oracle_abs) << "\n";
    os << "ks_threshold = " << fmt_num(ks_threshold) << "\n";
    os << "expect_compliant = " << (expect_compliant ? "on" : "off") << "\n";
    os << "trials = " << trials << "\n";
    os << "samples = " << samples << "\n";
    os << "t_max = " << fmt_num(t_max) << "\n";
    os << "grid_n = " << grid_n << "\n";
    os << "pair_i = " << pair_i << "\n";
    os << "pair_j = " << pair_j << "\n";
    return os.str();
}

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace fvlab
