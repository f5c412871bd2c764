#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dimerwave/material.hpp"
#include "dimerwave/solver.hpp"

namespace dimerwave {

/// Parsed and validated run configuration.  The task block is kept as raw
/// JSON text; subcommands read the keys they need through the accessors.
struct RunConfig {
    Material material = Material::dimer(1.0, 2.0, 1.0);
    int max_degree = 3;

    SolverConfig numerics;      // truncation/grid/tolerances/mode/cap
    double c2 = 2.0;            // default wave speed squared for tasks that need one
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    std::string task_json = "{}";

    /// Parses JSON text, applies dotted-path overrides ("numerics.truncation=64"),
    /// validates, and fills defaults.  ConfigError names the offending field.
    static RunConfig parse(const std::string& json_text,
                           const std::vector<std::string>& overrides = {});
    static RunConfig defaults();

    // Task-block accessors with defaults; ConfigError on type mismatch.
    double task_number(const std::string& key, double fallback) const;
    std::vector<double> task_numbers(const std::string& key,
                                     const std::vector<double>& fallback) const;
    long long task_integer(const std::string& key, long long fallback) const;
    std::string task_string(const std::string& key, const std::string& fallback) const;
    bool task_has(const std::string& key) const;
};

}  // namespace dimerwave
