#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imgctx {

// One-tailed binomial proportion test under the equal-opportunity null:
// X of n relevant items fall in the location under test, against
// p = 1/candidate_locations (or an explicit proportion_override, e.g. a
// externally rounded value).
struct BinomialTestInput {
    std::size_t successes = 0;          // X
    std::size_t total = 0;              // n
    std::size_t candidate_locations = 2;  // k, defines p = 1/k
    double alpha = 0.05;
    std::optional<double> proportion_override;
};

enum class TestDecision { RejectH0, AcceptH0 };

struct BinomialTestResult {
    double z = 0;
    double critical = 0;
    TestDecision decision = TestDecision::AcceptH0;
    bool approximation_valid = false;  // np > 10 and nq > 10
};

BinomialTestResult binomial_location_test(const BinomialTestInput& input);

// Upper-tail standard normal quantile (z with P(Z > z) = alpha).
double normal_upper_quantile(double alpha);

// Sample Pearson correlation; throws std::invalid_argument on length
// mismatch, fewer than two points, or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct SplitHalfResult {
    double r = 0;
    bool acceptable = false;  // r >= 0.70
};

// Reliability over two already-split halves (per-location frequency vectors
// or any paired measurements).
SplitHalfResult split_half_reliability(std::span<const double> half_x,
                                       std::span<const double> half_y);

// Randomly splits labeled observations into two halves (seeded, reproducible),
// builds per-label frequency vectors and correlates them.
SplitHalfResult split_half_reliability(const std::vector<std::string>& labels,
                                       std::uint64_t seed);

}  // namespace imgctx
