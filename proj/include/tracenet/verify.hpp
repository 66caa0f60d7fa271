#pragma once

#include "tracenet/async_system.hpp"
#include "tracenet/petri_net.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tracenet {

enum class CheckStatus { Pass, Fail, Skip };

std::string to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double residual = 0.0;
    std::string detail;
};

struct VerifyOptions {
    /// Truncation order of the G(z) M(z) = I check.
    std::size_t order = 10;
    /// Deepest prefix compared against the oracle (1..3).
    std::size_t depth = 2;
    /// Longest traces enumerated by brute force; lowered automatically when
    /// the enumeration would exceed enumeration_budget traces.
    std::size_t enumeration_length = 8;
    std::size_t enumeration_budget = 200000;
    /// Longest x and y in the chain-rule check.
    std::size_t chain_rule_length = 3;
    double root_tolerance = 1e-12;
    double probability_tolerance = 1e-9;
    double chain_rule_tolerance = 1e-12;
    /// Multiply one Gamma entry out of s0 by 1.01 before the measure checks.
    bool inject_gamma_fault = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool pass() const;
    [[nodiscard]] std::size_t count(CheckStatus s) const;
};

/// Runs every oracle on one system and appends the results, names prefixed
/// with `prefix`.
void verify_system(const AsyncSystem& sys, const VerifyOptions& options, VerifyReport& report,
                   const std::string& prefix = "");

/// The same suite on `count` nets from random_safe_net(seed + i).
void verify_random_nets(std::size_t count, std::uint64_t seed, const VerifyOptions& options, VerifyReport& report);

} // namespace tracenet
