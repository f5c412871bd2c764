#include "dimerwave/config.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

// "a.b.c=value" -> pointer /a/b/c set to parsed value (JSON literal if it
// parses, raw string otherwise).
void apply_override(json& root, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + kv + "' must have the form key=value");
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    std::string pointer = "/";
    for (char ch : key) pointer += (ch == '.') ? '/' : ch;
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;
    }
    try {
        root[json::json_pointer(pointer)] = parsed;
    } catch (const json::exception& e) {
        throw ConfigError("override '" + kv + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

}  // namespace

RunConfig RunConfig::defaults() { return RunConfig{}; }

RunConfig RunConfig::parse(const std::string& json_text, const std::vector<std::string>& overrides) {
    json root = parse_json(json_text.empty() ? "{}" : json_text, "config");
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    for (const std::string& kv : overrides) apply_override(root, kv);

    RunConfig cfg;
    if (root.contains("material")) {
        const json& m = root.at("material");
        double mass = get_or<double>(m, "m", 1.0);
        double kappa = get_or<double>(m, "kappa", 2.0);
        double beta = get_or<double>(m, "beta", 1.0);
        if (m.contains("force1") || m.contains("force2")) {
            std::vector<double> f1 = get_or<std::vector<double>>(m, "force1", {1.0, 1.0});
            std::vector<double> f2 = get_or<std::vector<double>>(m, "force2", {kappa, beta});
            cfg.material = Material::dimer_with_forces(mass, f1, f2);
        } else {
            cfg.material = Material::dimer(mass, kappa, beta);
        }
        cfg.max_degree = static_cast<int>(get_or<long long>(m, "max_degree", 3));
    }

    if (root.contains("numerics")) {
        const json& n = root.at("numerics");
        cfg.numerics.truncation = static_cast<int>(get_or<long long>(n, "truncation", 32));
        cfg.numerics.grid = static_cast<int>(get_or<long long>(n, "grid", 0));
        cfg.numerics.tol_increment = get_or<double>(n, "tol_increment", 1e-12);
        cfg.numerics.max_iter = static_cast<int>(get_or<long long>(n, "max_iter", 200));
        cfg.numerics.relaxation = get_or<double>(n, "relaxation", 1.0);
        cfg.numerics.amplitude_cap = get_or<double>(n, "amplitude_cap", 0.0);
        cfg.numerics.residual_tol = get_or<double>(n, "residual_tol", 1e-10);
        std::string mode = get_or<std::string>(n, "mode", "fixed-point");
        if (mode == "fixed-point")
            cfg.numerics.mode = SolverMode::fixed_point;
        else if (mode == "lyapunov-center")
            cfg.numerics.mode = SolverMode::lyapunov_center;
        else
            throw ConfigError("numerics.mode must be 'fixed-point' or 'lyapunov-center'");
    } else {
        cfg.numerics.truncation = 32;
    }

    cfg.c2 = get_or<double>(root, "c2", 2.0);
    cfg.seed = static_cast<std::uint64_t>(get_or<long long>(root, "seed", 1));
    if (root.contains("output")) cfg.out_dir = get_or<std::string>(root.at("output"), "dir", ".");
    if (root.contains("task")) cfg.task_json = root.at("task").dump();

    // Validation.
    ValidationReport rep = validate(cfg.material, cfg.max_degree);
    if (!rep.ok()) throw ConfigError("material: " + rep.to_string());
    if (cfg.numerics.truncation < 2) throw ConfigError("numerics.truncation must be >= 2");
    int min_grid = (cfg.material.max_force_degree() + 1) * cfg.numerics.truncation + 1;
    if (cfg.numerics.grid != 0 && cfg.numerics.grid < min_grid) {
        std::ostringstream os;
        os << "numerics.grid " << cfg.numerics.grid << " below the dealiasing bound " << min_grid;
        throw ConfigError(os.str());
    }
    if (!(cfg.numerics.tol_increment > 0.0)) throw ConfigError("numerics.tol_increment must be positive");
    if (!(cfg.numerics.residual_tol > 0.0)) throw ConfigError("numerics.residual_tol must be positive");
    if (cfg.numerics.max_iter < 1) throw ConfigError("numerics.max_iter must be >= 1");
    if (!(cfg.numerics.relaxation > 0.0 && cfg.numerics.relaxation <= 1.0))
        throw ConfigError("numerics.relaxation must lie in (0, 1]");
    if (!(cfg.c2 > 0.0)) throw ConfigError("c2 must be positive");
    return cfg;
}

double RunConfig::task_number(const std::string& key, double fallback) const {
    json t = parse_json(task_json, "task");
    return get_or<double>(t, key, fallback);
}

std::vector<double> RunConfig::task_numbers(const std::string& key,
                                            const std::vector<double>& fallback) const {
    json t = parse_json(task_json, "task");
    return get_or<std::vector<double>>(t, key, fallback);
}

long long RunConfig::task_integer(const std::string& key, long long fallback) const {
    json t = parse_json(task_json, "task");
    return get_or<long long>(t, key, fallback);
}

std::string RunConfig::task_string(const std::string& key, const std::string& fallback) const {
    json t = parse_json(task_json, "task");
    return get_or<std::string>(t, key, fallback);
}

bool RunConfig::task_has(const std::string& key) const {
    json t = parse_json(task_json, "task");
    return t.contains(key);
}

}  // namespace dimerwave
