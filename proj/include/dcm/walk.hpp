#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/error.hpp"
#include "dcm/random.hpp"

namespace dcm {

/// Moves from x to a uniformly chosen sibling of eta(x), never back along the edge just used.
template <class URBG>
half_edge walk_step(const Configuration& c, const DegreeSequence& seq, half_edge x, URBG& gen) {
    const half_edge landing = c[x];
    const auto range = seq.siblings_range_of(landing);
    // range.size() - 1 == deg(landing) >= 1 under the minimum-degree rule
    half_edge y = range.first + static_cast<half_edge>(uniform_below(gen, range.size() - 1));
    if (y >= landing) ++y;
    return y;
}

inline bool is_nonbacktracking_step(const Configuration& c, const DegreeSequence& seq, half_edge from,
                                    half_edge to) {
    return seq.are_siblings(c[from], to);
}

/// Row-major square matrix; only used at enumeration scale.
struct DenseMatrix {
    std::size_t size = 0;
    std::vector<double> values;

    explicit DenseMatrix(std::size_t n = 0) : size(n), values(n * n, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

inline constexpr std::size_t default_matrix_limit = 4096;

/// P(x, y) = 1/deg(y) when y is a sibling of c(x), else 0.
inline DenseMatrix transition_matrix(const Configuration& c, const DegreeSequence& seq,
                                     std::size_t ell_limit = default_matrix_limit) {
    if (c.ell() != seq.ell()) throw validation_error("transition_matrix: configuration does not match degrees");
    if (c.ell() > ell_limit) {
        throw scale_error("transition_matrix: ell = " + std::to_string(c.ell()) + " exceeds the limit " +
                          std::to_string(ell_limit));
    }
    DenseMatrix p(c.ell());
    for (half_edge x = 0; x < c.ell(); ++x) {
        const half_edge landing = c[x];
        const auto range = seq.siblings_range_of(landing);
        for (half_edge y = range.first; y < range.last; ++y) {
            if (y != landing) p(x, y) = 1.0 / static_cast<double>(seq.out_degree(y));
        }
    }
    return p;
}

/*
 * One run of the joint (graph, walk) chain.
 *
 * positions[t] is X_t. tau is the first step t with X_{t-1} in R_{<=t}, the
 * union of the rewired sets up to and including step t.
 */
struct JointTrajectory {
    std::vector<half_edge> positions;
    std::optional<std::size_t> tau;
    RewiringTrace trace;
};

/// Recomputes tau by scanning the trace from scratch.
inline std::optional<std::size_t> rescan_tau(const std::vector<half_edge>& positions, const RewiringTrace& trace) {
    for (std::size_t t = 1; t < positions.size() && t <= trace.steps(); ++t) {
        for (std::size_t s = 0; s < t; ++s) {
            for (half_edge r : trace.per_step[s]) {
                if (r == positions[t - 1]) return t;
            }
        }
    }
    return std::nullopt;
}

/*
 * Rewire first, then move under the new configuration, for `steps` steps.
 * Mirrors the joint transition Q(C_{t-1}, C_t) P_{C_t}(X_{t-1}, X_t).
 */
template <class URBG>
JointTrajectory run_joint(const Configuration& eta, const DegreeSequence& seq, half_edge x0, std::size_t k,
                          std::size_t steps, URBG& gen) {
    if (eta.ell() != seq.ell()) throw validation_error("run_joint: configuration does not match degrees");
    if (x0 >= eta.ell()) throw validation_error("run_joint: start half-edge out of range");
    check_k(k, eta.m());
    JointTrajectory out;
    out.trace = RewiringTrace(eta.ell());
    out.positions.reserve(steps + 1);
    out.positions.push_back(x0);
    Configuration c = eta;
    EdgeRewirer rewirer(c);
    for (std::size_t t = 1; t <= steps; ++t) {
        out.trace.record(rewirer.step(c, k, gen));
        const half_edge here = out.positions.back();
        if (!out.tau && out.trace.cumulative[here]) out.tau = t;
        out.positions.push_back(walk_step(c, seq, here, gen));
    }
    return out;
}

/*
 * Reusable full-graph sampler for replica loops: every replica rewires the
 * whole configuration, copying eta in O(ell) on reset.
 */
class FullJointSampler {
public:
    FullJointSampler(const Configuration& eta, const DegreeSequence& seq, std::size_t k)
        : eta_(eta), seq_(seq), k_(k), current_(eta), stamp_(eta.ell(), 0) {
        if (eta.ell() != seq.ell()) throw validation_error("sampler: configuration does not match degrees");
        check_k(k, eta.m());
    }

    /// Writes X_0..X_steps into `positions`; returns tau if it occurs within `steps`.
    template <class URBG>
    std::optional<std::size_t> run(half_edge x0, std::size_t steps, URBG& gen, std::vector<half_edge>& positions) {
        current_ = eta_;
        rewirer_.reset(current_);
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        positions.clear();
        positions.push_back(x0);
        std::optional<std::size_t> tau;
        for (std::size_t t = 1; t <= steps; ++t) {
            for (half_edge r : rewirer_.step(current_, k_, gen)) stamp_[r] = epoch_;
            const half_edge here = positions.back();
            if (!tau && stamp_[here] == epoch_) tau = t;
            positions.push_back(walk_step(current_, seq_, here, gen));
        }
        return tau;
    }

    const Configuration& initial() const noexcept { return eta_; }
    const DegreeSequence& degrees() const noexcept { return seq_; }
    std::size_t k() const noexcept { return k_; }

private:
    const Configuration& eta_;
    const DegreeSequence& seq_;
    std::size_t k_;
    Configuration current_;
    EdgeRewirer rewirer_;
    std::vector<std::uint32_t> stamp_;  // stamp_[x] == epoch_ iff x in R_{<=t} this run
    std::uint32_t epoch_ = 0;
};

}  // namespace dcm
