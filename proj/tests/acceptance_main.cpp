// Acceptance suite: runs every certification criterion on the default test
// model (kappa=2, w=1, beta=1, c^2=2, N=32 with the solver criteria repeated
// at N=64, seed=1) and prints one pass/fail line per criterion.

#include <cstdio>

#include "dimerwave/verify.hpp"

int main() {
    dimerwave::VerifySetup setup;
    std::vector<dimerwave::CriterionResult> results = dimerwave::run_verification(setup);
    bool all = true;
    int i = 0;
    for (const auto& r : results) {
        ++i;
        std::printf("[%s] %2d. %s — %s\n", r.pass ? "PASS" : "FAIL", i, r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILED");
    return all ? 0 : 1;
}
