#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <toml.hpp>

#include "gfq/errors.hpp"

namespace gfq::cli {

namespace {

template <class T>
void read(const toml::table& t, const char* key, T& dst) {
    const toml::node* n = t.get(key);
    if (!n) return;
    if constexpr (std::is_same_v<T, bool>) {
        if (auto v = n->value<bool>()) { dst = *v; return; }
    } else if constexpr (std::is_integral_v<T>) {
        if (auto v = n->value<std::int64_t>()) { dst = static_cast<T>(*v); return; }
    } else if constexpr (std::is_floating_point_v<T>) {
        if (auto v = n->value<double>()) { dst = *v; return; }
    } else {
        if (auto v = n->value<std::string>()) { dst = *v; return; }
    }
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
}

template <class T>
void take(const std::optional<T>& src, T& dst) {
    if (src) dst = *src;
}

}  // namespace

void RunConfig::validate() const {
    static const std::vector<std::string> audits{"det", "kernel", "involution"};
    if (command == "run" || command == "converge" || command == "project") {
        if (case_name.empty()) throw ConfigError("--case is required");
        experiment().validate();
    } else {
        parse_scheme(scheme);
        if (K < 1 || K > 8) throw ConfigError("K must lie in [1, 8]");
        if (nx < 1 || ny < 1 || nx > 1024 || ny > 1024) throw ConfigError("cell counts must lie in [1, 1024]");
        if (!(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
    }
    if (command == "converge") {
        if (Ns.size() < 2) throw ConfigError("--Ns needs at least two meshes");
        for (int n : Ns)
            if (n < 1 || n > 1024) throw ConfigError("mesh sizes must lie in [1, 1024]");
    }
    if (jobs < 1) throw ConfigError("--jobs must be positive");
    if (command == "symbols" && std::find(audits.begin(), audits.end(), audit) == audits.end())
        throw ConfigError("unknown audit '" + audit + "' (det, kernel, involution)");
    if (command == "symbols" && samples < 1) throw ConfigError("--samples must be positive");
    if (command == "project" && method != "opt" && method != "llrr")
        throw ConfigError("unknown projection '" + method + "' (opt, llrr)");
}

ExperimentConfig RunConfig::experiment() const {
    ExperimentConfig e;
    e.case_name = case_name;
    try {
        e.scheme = parse_scheme(scheme);
    } catch (const ParameterError& err) {
        throw ConfigError(err.what());
    }
    e.K = K;
    e.nx = nx;
    e.ny = ny;
    e.alpha = alpha;
    e.cfl = cfl;
    e.M = M;
    e.P = P;
    e.init = parse_init_mode(init);
    e.T_final = T_final;
    e.cadence = cadence;
    e.perturb = perturb;
    e.seed = seed;
    e.noise = noise;
    return e;
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["case"] = case_name;
    j["scheme"] = scheme;
    j["K"] = K;
    j["nx"] = nx;
    j["ny"] = ny;
    j["alpha"] = alpha;
    j["cfl"] = cfl;
    j["M"] = M > 0 ? M : default_subtimesteps(K);
    j["P"] = P > 0 ? P : default_iterations(K);
    j["init"] = init;
    j["T_final"] = T_final;
    j["seed"] = seed;
    j["noise"] = noise;
    j["cadence"] = cadence;
    j["perturb"] = perturb;
    j["Ns"] = Ns;
    j["jobs"] = jobs;
    j["audit"] = audit;
    j["samples"] = samples;
    j["method"] = method;
    j["reversed"] = reversed;
    j["dense"] = dense;
    j["out"] = run_dir().string();
    return j;
}

std::filesystem::path RunConfig::run_dir() const {
    std::filesystem::path root = out;
    if (root.empty()) {
        const char* env = std::getenv("GFQ_OUTPUT_ROOT");
        root = env && *env ? env : "runs";
    }
    std::ostringstream name;
    name << command;
    if (!case_name.empty() && command != "symbols" && command != "kernel-audit") name << '_' << case_name;
    if (command != "project" && command != "kernel-audit") name << '_' << scheme;
    name << "_K" << K;
    if (command == "converge") {
        name << "_N";
        for (std::size_t i = 0; i < Ns.size(); ++i) name << (i ? "-" : "") << Ns[i];
    } else if (command != "symbols") {
        name << "_N" << nx << 'x' << ny;
    }
    if (command == "symbols") name << '_' << audit;
    if (command == "project") name << '_' << method;
    return root / name.str();
}

void apply_toml(RunConfig& cfg, const std::filesystem::path& file) {
    toml::table doc;
    try {
        doc = toml::parse_file(file.string());
    } catch (const toml::parse_error& e) {
        std::ostringstream s;
        s << "cannot parse " << file.string() << ": " << e.description() << " at " << e.source().begin;
        throw ConfigError(s.str());
    }
    const toml::table* t = &doc;
    if (const toml::table* sub = doc.get_as<toml::table>(cfg.command)) t = sub;
    read(*t, "case", cfg.case_name);
    read(*t, "scheme", cfg.scheme);
    read(*t, "K", cfg.K);
    if (t->contains("N")) {
        read(*t, "N", cfg.nx);
        cfg.ny = cfg.nx;
    }
    read(*t, "nx", cfg.nx);
    read(*t, "ny", cfg.ny);
    read(*t, "alpha", cfg.alpha);
    read(*t, "cfl", cfg.cfl);
    read(*t, "M", cfg.M);
    read(*t, "P", cfg.P);
    read(*t, "init", cfg.init);
    read(*t, "T_final", cfg.T_final);
    read(*t, "out", cfg.out);
    read(*t, "seed", cfg.seed);
    read(*t, "noise", cfg.noise);
    read(*t, "cadence", cfg.cadence);
    read(*t, "perturb", cfg.perturb);
    read(*t, "jobs", cfg.jobs);
    read(*t, "audit", cfg.audit);
    read(*t, "samples", cfg.samples);
    read(*t, "method", cfg.method);
    read(*t, "reversed", cfg.reversed);
    read(*t, "dense", cfg.dense);
    if (const toml::array* a = t->get_as<toml::array>("Ns")) {
        cfg.Ns.clear();
        for (const auto& n : *a) {
            const auto v = n.value<std::int64_t>();
            if (!v) throw ConfigError("config key 'Ns' must be an array of integers");
            cfg.Ns.push_back(static_cast<int>(*v));
        }
    }
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    take(o.case_name, cfg.case_name);
    take(o.scheme, cfg.scheme);
    take(o.init, cfg.init);
    take(o.out, cfg.out);
    take(o.audit, cfg.audit);
    take(o.method, cfg.method);
    take(o.K, cfg.K);
    if (o.N) cfg.nx = cfg.ny = *o.N;
    take(o.nx, cfg.nx);
    take(o.ny, cfg.ny);
    take(o.M, cfg.M);
    take(o.P, cfg.P);
    take(o.jobs, cfg.jobs);
    take(o.samples, cfg.samples);
    take(o.alpha, cfg.alpha);
    take(o.cfl, cfg.cfl);
    take(o.T_final, cfg.T_final);
    take(o.noise, cfg.noise);
    take(o.seed, cfg.seed);
    take(o.cadence, cfg.cadence);
    take(o.Ns, cfg.Ns);
    cfg.perturb = cfg.perturb || o.perturb;
    cfg.reversed = cfg.reversed || o.reversed;
    cfg.dense = cfg.dense || o.dense;
}

}  // namespace gfq::cli
