#include "imgctx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace imgctx {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double normal_upper_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    double lo = -12.0, hi = 12.0;
    const double target = 1.0 - alpha;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BinomialTestResult binomial_location_test(const BinomialTestInput& input) {
    if (input.total == 0) throw std::invalid_argument("n must be positive");
    if (input.successes > input.total)
        throw std::invalid_argument("X cannot exceed n");
    double p;
    if (input.proportion_override) {
        p = *input.proportion_override;
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("hypothesized proportion must lie in (0, 1)");
    } else {
        if (input.candidate_locations < 2)
            throw std::invalid_argument("need at least 2 candidate locations");
        p = 1.0 / static_cast<double>(input.candidate_locations);
    }
    const double q = 1.0 - p;
    const double n = static_cast<double>(input.total);
    const double sample = static_cast<double>(input.successes) / n;

    BinomialTestResult result;
    result.z = (sample - p) / std::sqrt(p * q / n);
    result.critical = normal_upper_quantile(input.alpha);
    result.approximation_valid = n * p > 10.0 && n * q > 10.0;
    result.decision = result.approximation_valid && result.z > result.critical
                          ? TestDecision::RejectH0
                          : TestDecision::AcceptH0;
    return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("vectors must have equal length");
    if (x.size() < 2)
        throw std::invalid_argument("need at least two points");
    const double n = static_cast<double>(x.size());
    double mean_x = 0, mean_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double cov = 0, var_x = 0, var_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0)
        throw std::invalid_argument("correlation undefined for zero variance");
    return std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);
}

SplitHalfResult split_half_reliability(std::span<const double> half_x,
                                       std::span<const double> half_y) {
    SplitHalfResult result;
    result.r = pearson(half_x, half_y);
    result.acceptable = result.r >= 0.70;
    return result;
}

SplitHalfResult split_half_reliability(const std::vector<std::string>& labels,
                                       std::uint64_t seed) {
    if (labels.size() < 2)
        throw std::invalid_argument("need at least two observations to split");
    std::vector<std::string> shuffled = labels;
    std::mt19937_64 rng(seed);
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng() % i]);

    const std::size_t half = (shuffled.size() + 1) / 2;
    std::map<std::string, std::pair<double, double>> freq;
    for (const std::string& label : labels) freq[label];  // fixed universe
    for (std::size_t i = 0; i < shuffled.size(); ++i)
        (i < half ? freq[shuffled[i]].first : freq[shuffled[i]].second) += 1.0;

    std::vector<double> x, y;
    for (const auto& [label, counts] : freq) {
        x.push_back(counts.first);
        y.push_back(counts.second);
    }
    return split_half_reliability(x, y);
}

}  // namespace imgctx
