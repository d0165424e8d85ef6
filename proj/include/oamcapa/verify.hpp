// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale self-check of the simulator's physical and numerical invariants.

#pragma once

#include "oamcapa/em_core.hpp"

#include <string>
#include <vector>

namespace oamcapa {

struct VerifyOptions {
    DyadicKernel kernel = dyadic_green;
    // Quadrature for the channel-level checks; 0 selects 256.
    int quadrature = 0;
    unsigned seed = 20240611;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;     // measured figure (error, ratio, ...)
    double threshold = 0.0; // pass limit for `value`
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;

    bool passed() const;
    const CheckResult& check(const std::string& name) const;
    std::string to_json() const;
    std::string to_text() const;
};

VerifyReport verify_suite(const VerifyOptions& options = {});

} // namespace oamcapa
