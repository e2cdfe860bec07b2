#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace uptail {

/// Outcome of one named property suite.
struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    /// The first few failure descriptions.
    std::vector<std::string> messages;

    bool ok() const { return failures == 0; }
    void check(bool cond, const std::string& what);
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    /// Scales the number of randomized instances; 1 is the default size.
    double scale = 1.0;
};

/// Frozen bracket for Var X / ((1-p) Lambda) on AP(n,3), 50 <= n <= 200,
/// 0.05 <= p <= 0.5.
inline constexpr double kApVarianceRatioLow = 1.31;
inline constexpr double kApVarianceRatioHigh = 2.31;

/// Frozen constants c(eps) with ln Pr(X >= (1+eps) mu) <= -c min{mu, sqrt(mu) ln(e/p)}
/// on AP(n,3), 16 <= n <= 24, p in {0.10, 0.15, ..., 0.50}, wherever the
/// tail is at least 1e-9.
struct UpperTailFit {
    double eps;
    double c;
};
inline constexpr UpperTailFit kApUpperTailFit[] = {{0.25, 0.178}, {0.5, 0.233}, {1.0, 0.352}, {2.0, 0.617}};

const std::vector<std::string>& suite_names();
/// Runs one suite by name; throws ContractViolation for unknown names.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

SuiteResult verify_phi(const VerifyOptions& opts);
SuiteResult verify_variance(const VerifyOptions& opts);
SuiteResult verify_sandwich(const VerifyOptions& opts);
SuiteResult verify_bk(const VerifyOptions& opts);
SuiteResult verify_cascade(const VerifyOptions& opts);
SuiteResult verify_lowerbounds(const VerifyOptions& opts);

}  // namespace uptail
