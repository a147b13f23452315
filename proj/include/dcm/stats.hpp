#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dcm/error.hpp"

namespace dcm {

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/*
 * Plug-in TV distance of the empirical law of `counts` (n observations) to
 * uniform on counts.size() cells, with a delete-one jackknife standard error.
 * Deleting one observation only changes the cell it fell in, so the whole
 * jackknife is O(cells).
 */
template <class Count>
Estimate plugin_tv(std::span<const Count> counts, std::uint64_t n) {
    if (n == 0) throw validation_error("plugin_tv: no observations");
    const double cells = static_cast<double>(counts.size());
    const double u = 1.0 / cells;
    double full = 0.0;
    for (auto c : counts) full += std::abs(static_cast<double>(c) / static_cast<double>(n) - u);
    Estimate out{0.5 * full, 0.0};
    if (n < 2) return out;

    const double nm1 = static_cast<double>(n - 1);
    double base = 0.0;  // sum over cells of |c/(n-1) - u|
    for (auto c : counts) base += std::abs(static_cast<double>(c) / nm1 - u);
    auto leave_one_out = [&](double c) {
        return 0.5 * (base - std::abs(c / nm1 - u) + std::abs((c - 1.0) / nm1 - u));
    };
    double mean = 0.0;
    for (auto c : counts) {
        if (c > 0) mean += static_cast<double>(c) * leave_one_out(static_cast<double>(c));
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double d = leave_one_out(static_cast<double>(c)) - mean;
        ss += static_cast<double>(c) * d * d;
    }
    out.se = std::sqrt(nm1 / static_cast<double>(n) * ss);
    return out;
}

/// Proportion with its binomial standard error sqrt(p(1-p)/n).
inline Estimate proportion(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) throw validation_error("proportion: no observations");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

/// Wilson score interval.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96) {
    if (n == 0) throw validation_error("wilson_interval: no observations");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/*
 * Upper bound on the TV distance to uniform from the chi-square distance,
 * TV <= (1/2) sqrt(cells * sum p^2 - 1), with sum p^2 estimated without bias
 * from pair collisions. Useful when n is far below the cell count, where the
 * plug-in estimator is dominated by its bias.
 */
template <class Count>
Estimate collision_tv_bound(std::span<const Count> counts, std::uint64_t n) {
    if (n < 3) throw validation_error("collision_tv_bound: needs at least three observations");
    const double nn = static_cast<double>(n);
    double pairs = 0.0;
    double triples = 0.0;
    for (auto c : counts) {
        const double x = static_cast<double>(c);
        pairs += x * (x - 1.0);
        triples += x * (x - 1.0) * (x - 2.0);
    }
    const double s2 = pairs / (nn * (nn - 1.0));
    const double s3 = triples / (nn * (nn - 1.0) * (nn - 2.0));
    // variance of the U-statistic for sum p^2
    const double var = std::max(0.0, 4.0 * (nn - 2.0) / (nn * (nn - 1.0)) * (s3 - s2 * s2) +
                                         2.0 / (nn * (nn - 1.0)) * (s2 - s2 * s2));
    const double cells = static_cast<double>(counts.size());
    const double chi2 = std::max(0.0, cells * s2 - 1.0);
    const double value = std::min(1.0, 0.5 * std::sqrt(chi2));
    const double shifted = std::min(1.0, 0.5 * std::sqrt(chi2 + cells * std::sqrt(var)));
    return {value, shifted - value};
}

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

inline double chi_square_upper_tail(double statistic, std::size_t dof) {
    if (dof == 0) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

/// Pearson goodness of fit of observed counts against expected probabilities.
inline ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) throw validation_error("chi_square_gof: size mismatch");
    std::uint64_t n = 0;
    for (auto o : observed) n += o;
    if (n == 0) throw validation_error("chi_square_gof: no observations");
    ChiSquareResult r;
    std::size_t used = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) {
            if (observed[i] > 0) throw validation_error("chi_square_gof: observation in a zero-probability cell");
            continue;
        }
        const double e = expected[i] * static_cast<double>(n);
        const double d = static_cast<double>(observed[i]) - e;
        r.statistic += d * d / e;
        ++used;
    }
    r.dof = used > 0 ? used - 1 : 0;
    r.p_value = chi_square_upper_tail(r.statistic, r.dof);
    return r;
}

/// Chi-square test of homogeneity for two count vectors over the same categories.
inline ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw validation_error("chi_square_two_sample: size mismatch");
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]);
    }
    if (na == 0.0 || nb == 0.0) throw validation_error("chi_square_two_sample: empty sample");
    ChiSquareResult r;
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double total = static_cast<double>(a[i] + b[i]);
        if (total == 0.0) continue;
        const double ea = total * na / (na + nb);
        const double eb = total * nb / (na + nb);
        const double da = static_cast<double>(a[i]) - ea;
        const double db = static_cast<double>(b[i]) - eb;
        r.statistic += da * da / ea + db * db / eb;
        ++used;
    }
    r.dof = used > 0 ? used - 1 : 0;
    r.p_value = chi_square_upper_tail(r.statistic, r.dof);
    return r;
}

/// Pooled two-proportion z statistic for independent samples.
inline double two_proportion_z(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2) {
    if (n1 == 0 || n2 == 0) throw validation_error("two_proportion_z: empty sample");
    const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
    const double pool = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
    const double var = pool * (1 - pool) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
    if (var <= 0.0) return 0.0;
    return (p1 - p2) / std::sqrt(var);
}

/// McNemar z for paired binary outcomes: b = (1,0) pairs, c = (0,1) pairs.
inline double mcnemar_z(std::uint64_t b, std::uint64_t c) {
    if (b + c == 0) return 0.0;
    return (static_cast<double>(b) - static_cast<double>(c)) / std::sqrt(static_cast<double>(b + c));
}

}  // namespace dcm
