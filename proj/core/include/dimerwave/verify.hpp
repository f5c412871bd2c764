#pragma once

#include <cstdint>

#include "dimerwave/material.hpp"
#include "dimerwave/serialize.hpp"

namespace dimerwave {

/// Model and discretization the verification suite runs on.  Defaults are
/// the standard test model: kappa=2, w=1, beta=1, c^2=2, N=32, seed=1
/// (solver criteria additionally run at N=64).
struct VerifySetup {
    Material material = Material::dimer(1.0, 2.0, 1.0);
    double c2 = 2.0;
    int truncation = 32;
    int grid = 0;
    std::uint64_t seed = 1;
};

/// Runs the full certification suite: every identity and estimate the
/// library is built on, checked at pinned tolerances.  One result per
/// criterion; nothing throws for a mere failure (failures are reported),
/// but setup errors propagate.
std::vector<CriterionResult> run_verification(const VerifySetup& setup);

}  // namespace dimerwave
