#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/error.hpp"
#include "dcm/random.hpp"

namespace dcm {

inline void check_k(std::size_t k, std::size_t m) {
    if (k < 2 || k > m) {
        throw validation_error("k = " + std::to_string(k) + " must lie in [2, m] with m = " + std::to_string(m));
    }
}

/*
 * In-place k-edge rewiring on a configuration it does not own.
 *
 * Keeps one representative half-edge per current edge so that a uniform
 * k-subset of edges costs O(k): a partial Fisher-Yates shuffle moves the
 * chosen edges to the front of the list, and the freshly formed edges are
 * written back into those slots.
 */
class EdgeRewirer {
public:
    EdgeRewirer() = default;
    explicit EdgeRewirer(const Configuration& c) { reset(c); }

    void reset(const Configuration& c) {
        edges_.clear();
        edges_.reserve(c.m());
        for (half_edge x = 0; x < c.ell(); ++x) {
            if (x < c[x]) edges_.push_back(x);
        }
    }

    /// Rewires k uniformly chosen edges of `c`; returns R_t sorted ascending.
    template <class URBG>
    const std::vector<half_edge>& step(Configuration& c, std::size_t k, URBG& gen) {
        const std::size_t m = edges_.size();
        check_k(k, m);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_below(gen, m - i);
            std::swap(edges_[i], edges_[j]);
        }
        rewired_.clear();
        for (std::size_t i = 0; i < k; ++i) {
            rewired_.push_back(edges_[i]);
            rewired_.push_back(c[edges_[i]]);
        }
        std::sort(rewired_.begin(), rewired_.end());
        pair_uniformly(std::span<const half_edge>(rewired_), c, gen);
        std::size_t slot = 0;
        for (half_edge x : rewired_) {
            if (x < c[x]) edges_[slot++] = x;
        }
        return rewired_;
    }

    std::size_t edge_count() const noexcept { return edges_.size(); }

private:
    std::vector<half_edge> edges_;
    std::vector<half_edge> rewired_;
};

struct RewireResult {
    Configuration next;
    std::vector<half_edge> rewired;  // R_t, sorted
};

/// One step of the k-edge rewiring chain. Copies `c`; use EdgeRewirer for hot loops.
template <class URBG>
RewireResult rewire_step(const Configuration& c, std::size_t k, URBG& gen) {
    check_k(k, c.m());
    RewireResult out{c, {}};
    EdgeRewirer rewirer(out.next);
    out.rewired = rewirer.step(out.next, k, gen);
    return out;
}

/// Per-step rewired sets R_t and their running union.
struct RewiringTrace {
    std::vector<std::vector<half_edge>> per_step;  // per_step[t-1] == R_t
    std::vector<bool> cumulative;                  // membership in R_{<=T}

    explicit RewiringTrace(std::size_t ell = 0) : cumulative(ell, false) {}

    void record(std::span<const half_edge> rewired) {
        per_step.emplace_back(rewired.begin(), rewired.end());
        for (half_edge x : rewired) cumulative[x] = true;
    }

    std::size_t steps() const noexcept { return per_step.size(); }

    std::size_t cumulative_size() const noexcept {
        return static_cast<std::size_t>(std::count(cumulative.begin(), cumulative.end(), true));
    }
};

template <class URBG>
std::pair<Configuration, RewiringTrace> evolve(const Configuration& c0, std::size_t k, std::size_t steps,
                                               URBG& gen) {
    check_k(k, c0.m());
    Configuration c = c0;
    RewiringTrace trace(c.ell());
    EdgeRewirer rewirer(c);
    for (std::size_t t = 0; t < steps; ++t) trace.record(rewirer.step(c, k, gen));
    return {std::move(c), std::move(trace)};
}

struct RewiringRate {
    std::size_t k = 0;
    double effective_alpha = 0.0;
    bool adjusted = false;  // effective_alpha differs from the request
};

/// k = round(alpha * m), clamped into [2, m].
inline RewiringRate alpha_to_k(std::size_t m, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw validation_error("alpha = " + std::to_string(alpha) + " must lie in (0, 1]");
    }
    if (m < 2) throw validation_error("at least two edges are needed to rewire (m = " + std::to_string(m) + ")");
    const double raw = std::round(alpha * static_cast<double>(m));
    std::size_t k = raw < 2.0 ? 2 : static_cast<std::size_t>(raw);
    k = std::min(k, m);
    RewiringRate rate;
    rate.k = k;
    rate.effective_alpha = static_cast<double>(k) / static_cast<double>(m);
    rate.adjusted = std::abs(rate.effective_alpha - alpha) > 1e-12 * alpha;
    return rate;
}

inline RewiringRate alpha_to_k(const DegreeSequence& seq, double alpha) { return alpha_to_k(seq.m(), alpha); }

}  // namespace dcm
