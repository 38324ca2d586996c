// Acceptance suite: runs every property criterion at its contract scale and
// prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <iostream>

#include "pralg/selftest.hpp"

int main() {
    pralg::selftest::SelfTestConfig cfg; // contract defaults: seed 20240801, <= 10 atoms
    auto results = pralg::selftest::run_all(cfg, &std::cout);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all " << results.size() << " acceptance criteria passed\n";
    return 0;
}
