#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/error.hpp"
#include "dcm/walk.hpp"

namespace dcm {

inline constexpr std::size_t default_oracle_limit = 10;
inline constexpr std::size_t max_oracle_limit = 16;  // keys pack 4 bits per half-edge
inline constexpr std::size_t max_oracle_steps = 12;

/// All (ell-1)!! configurations on a degree sequence, in canonical order.
struct ConfSpace {
    DegreeSequence seq;
    std::vector<Configuration> configurations;
    std::unordered_map<std::uint64_t, std::size_t> index;

    std::size_t size() const noexcept { return configurations.size(); }

    static std::uint64_t key(const Configuration& c) {
        std::uint64_t k = 0;
        for (half_edge x = 0; x < c.ell(); ++x) k |= static_cast<std::uint64_t>(c[x]) << (4 * x);
        return k;
    }

    std::size_t index_of(const Configuration& c) const {
        if (c.ell() != seq.ell()) throw validation_error("configuration does not belong to this space");
        auto it = index.find(key(c));
        if (it == index.end()) throw validation_error("configuration does not belong to this space");
        return it->second;
    }
};

namespace detail {

inline void check_oracle_scale(std::size_t ell, std::size_t limit) {
    if (limit > max_oracle_limit) {
        throw scale_error("oracle limit " + std::to_string(limit) + " exceeds the hard maximum " +
                          std::to_string(max_oracle_limit));
    }
    if (ell > limit) {
        throw scale_error("oracle enumeration refused: ell = " + std::to_string(ell) + " exceeds the limit " +
                          std::to_string(limit));
    }
}

inline void enumerate_pairings(std::vector<half_edge>& pairing, std::vector<bool>& used,
                               std::vector<Configuration>& out) {
    half_edge first = 0;
    while (first < used.size() && used[first]) ++first;
    if (first == used.size()) {
        out.emplace_back(pairing);
        return;
    }
    used[first] = true;
    for (half_edge y = first + 1; y < used.size(); ++y) {
        if (used[y]) continue;
        used[y] = true;
        pairing[first] = y;
        pairing[y] = first;
        enumerate_pairings(pairing, used, out);
        used[y] = false;
    }
    used[first] = false;
}

}  // namespace detail

/// Pairs the lowest free half-edge with each other free one, recursively.
inline ConfSpace enumerate_configurations(const DegreeSequence& seq, std::size_t limit = default_oracle_limit) {
    detail::check_oracle_scale(seq.ell(), limit);
    ConfSpace space;
    space.seq = seq;
    std::vector<half_edge> pairing(seq.ell(), 0);
    std::vector<bool> used(seq.ell(), false);
    detail::enumerate_pairings(pairing, used, space.configurations);
    space.index.reserve(space.configurations.size());
    for (std::size_t i = 0; i < space.configurations.size(); ++i) {
        space.index.emplace(ConfSpace::key(space.configurations[i]), i);
    }
    return space;
}

/// Nonzero entries of one row of Q.
using SparseRow = std::vector<std::pair<std::size_t, double>>;

inline std::vector<SparseRow> exact_q_rows(const ConfSpace& space, std::size_t k) {
    const std::size_t m = space.seq.m();
    check_k(k, m);
    std::vector<double> by_distance(k + 1);
    for (std::size_t d = 0; d <= k; ++d) by_distance[d] = q_probability_for_distance(m, k, d);
    std::vector<SparseRow> rows(space.size());
    for (std::size_t a = 0; a < space.size(); ++a) {
        for (std::size_t b = 0; b < space.size(); ++b) {
            const std::size_t d = hamming(space.configurations[a], space.configurations[b]);
            if (d <= k) rows[a].emplace_back(b, by_distance[d]);
        }
    }
    return rows;
}

inline DenseMatrix exact_q_matrix(const ConfSpace& space, std::size_t k) {
    DenseMatrix q(space.size());
    const auto rows = exact_q_rows(space, k);
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (auto [b, p] : rows[a]) q(a, b) = p;
    }
    return q;
}

/*
 * Forward recursion on the joint state (configuration index, half-edge).
 * `initial` has size |space| * ell, laid out as initial[c * ell + x].
 * Returns the law of X_t for t = 0..t_max.
 */
inline std::vector<std::vector<double>> exact_walk_laws(const ConfSpace& space, const std::vector<double>& initial,
                                                        std::size_t k, std::size_t t_max) {
    if (t_max > max_oracle_steps) {
        throw scale_error("exact walk distribution limited to t <= " + std::to_string(max_oracle_steps));
    }
    const std::size_t ell = space.seq.ell();
    const std::size_t states = space.size() * ell;
    if (initial.size() != states) throw validation_error("initial joint law has the wrong size");
    const auto rows = exact_q_rows(space, k);
    const DegreeSequence& seq = space.seq;

    auto marginal = [&](const std::vector<double>& mass) {
        std::vector<double> law(ell, 0.0);
        for (std::size_t s = 0; s < states; ++s) law[s % ell] += mass[s];
        return law;
    };

    std::vector<std::vector<double>> laws;
    std::vector<double> mass = initial;
    std::vector<double> next(states);
    laws.push_back(marginal(mass));
    for (std::size_t t = 1; t <= t_max; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < space.size(); ++a) {
            for (half_edge x = 0; x < ell; ++x) {
                const double w = mass[a * ell + x];
                if (w == 0.0) continue;
                for (auto [b, q] : rows[a]) {
                    const half_edge landing = space.configurations[b][x];
                    const auto range = seq.siblings_range_of(landing);
                    const double share = w * q / static_cast<double>(range.size() - 1);
                    for (half_edge y = range.first; y < range.last; ++y) {
                        if (y != landing) next[b * ell + y] += share;
                    }
                }
            }
        }
        mass.swap(next);
        laws.push_back(marginal(mass));
    }
    return laws;
}

inline std::vector<std::vector<double>> exact_walk_laws(const ConfSpace& space, const Configuration& eta,
                                                        half_edge x0, std::size_t k, std::size_t t_max) {
    if (x0 >= space.seq.ell()) throw validation_error("start half-edge out of range");
    std::vector<double> initial(space.size() * space.seq.ell(), 0.0);
    initial[space.index_of(eta) * space.seq.ell() + x0] = 1.0;
    return exact_walk_laws(space, initial, k, t_max);
}

/// Exact law of X_t under the joint chain started at (eta, x0).
inline std::vector<double> exact_walk_distribution(const ConfSpace& space, const Configuration& eta, half_edge x0,
                                                   std::size_t k, std::size_t t) {
    return exact_walk_laws(space, eta, x0, k, t).back();
}

inline double tv_to_uniform(const std::vector<double>& law) {
    const double u = 1.0 / static_cast<double>(law.size());
    double s = 0.0;
    for (double p : law) s += std::abs(p - u);
    return 0.5 * s;
}

inline std::vector<double> exact_tv_curve(const ConfSpace& space, const Configuration& eta, half_edge x0,
                                          std::size_t k, std::size_t t_max) {
    std::vector<double> out;
    for (const auto& law : exact_walk_laws(space, eta, x0, k, t_max)) out.push_back(tv_to_uniform(law));
    return out;
}

inline double exact_tv(const ConfSpace& space, const Configuration& eta, half_edge x0, std::size_t k, std::size_t t) {
    return exact_tv_curve(space, eta, x0, k, t).back();
}

inline constexpr std::size_t tau_oracle_max_edges = 4;
inline constexpr std::size_t tau_oracle_max_steps = 4;
inline constexpr std::uint64_t tau_oracle_work_limit = 50'000'000;

namespace detail {

class TauEnumerator {
public:
    TauEnumerator(const DegreeSequence& seq, std::size_t k) : seq_(seq), k_(k) {
        const std::size_t m = seq.m();
        const auto den = static_cast<long double>(binomial_exact(m, k)) *
                         static_cast<long double>(double_factorial_odd(k));
        step_weight_ = 1.0L / den;
    }

    // Adds to survive[s] the probability of tau > s for s = depth..t_max.
    void descend(Configuration& c, half_edge x, std::uint32_t rewired, std::size_t depth, std::size_t t_max,
                 long double weight, std::vector<long double>& survive) {
        survive[depth] += weight;
        if (depth == t_max) return;
        std::vector<half_edge> reps;
        for (half_edge y = 0; y < c.ell(); ++y) {
            if (y < c[y]) reps.push_back(y);
        }
        std::vector<std::size_t> pick(k_);
        for (std::size_t i = 0; i < k_; ++i) pick[i] = i;
        for (;;) {
            tick();
            std::vector<half_edge> freed;
            std::uint32_t mask = rewired;
            for (std::size_t i : pick) {
                freed.push_back(reps[i]);
                freed.push_back(c[reps[i]]);
            }
            for (half_edge y : freed) mask |= 1U << y;
            if ((mask & (1U << x)) == 0) {
                std::sort(freed.begin(), freed.end());
                Configuration next = c;
                std::vector<bool> used(freed.size(), false);
                match(next, freed, used, x, mask, depth, t_max, weight * step_weight_, survive);
            }
            // next k-subset in lexicographic order
            std::size_t i = k_;
            while (i > 0 && pick[i - 1] == reps.size() - k_ + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k_; ++j) pick[j] = pick[j - 1] + 1;
        }
    }

private:
    void match(Configuration& c, const std::vector<half_edge>& freed, std::vector<bool>& used, half_edge x,
               std::uint32_t mask, std::size_t depth, std::size_t t_max, long double weight,
               std::vector<long double>& survive) {
        std::size_t first = 0;
        while (first < freed.size() && used[first]) ++first;
        if (first == freed.size()) {
            const half_edge landing = c[x];
            const auto range = seq_.siblings_range_of(landing);
            const long double share = weight / static_cast<long double>(range.size() - 1);
            for (half_edge y = range.first; y < range.last; ++y) {
                if (y == landing) continue;
                Configuration copy = c;
                descend(copy, y, mask, depth + 1, t_max, share, survive);
            }
            return;
        }
        used[first] = true;
        for (std::size_t j = first + 1; j < freed.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            c.link(freed[first], freed[j]);
            match(c, freed, used, x, mask, depth, t_max, weight, survive);
            used[j] = false;
        }
        used[first] = false;
    }

    void tick() {
        if (++work_ > tau_oracle_work_limit) {
            throw scale_error("exact tau enumeration exceeded its work limit");
        }
    }

    const DegreeSequence& seq_;
    std::size_t k_;
    long double step_weight_ = 0.0L;
    std::uint64_t work_ = 0;
};

}  // namespace detail

/// P(tau > s) for s = 0..t, by enumerating every rewiring and walk choice until tau fires.
inline std::vector<double> exact_tau_tail_curve(const DegreeSequence& seq, const Configuration& eta, half_edge x0,
                                                std::size_t k, std::size_t t) {
    if (eta.ell() != seq.ell()) throw validation_error("exact_tau_tail: configuration does not match degrees");
    if (x0 >= eta.ell()) throw validation_error("exact_tau_tail: start half-edge out of range");
    check_k(k, eta.m());
    if (eta.m() > tau_oracle_max_edges || t > tau_oracle_max_steps) {
        throw scale_error("exact tau enumeration needs m <= " + std::to_string(tau_oracle_max_edges) +
                          " and t <= " + std::to_string(tau_oracle_max_steps));
    }
    std::vector<long double> survive(t + 1, 0.0L);
    detail::TauEnumerator walker(seq, k);
    Configuration c = eta;
    walker.descend(c, x0, 0U, 0, t, 1.0L, survive);
    return {survive.begin(), survive.end()};
}

inline double exact_tau_tail(const DegreeSequence& seq, const Configuration& eta, half_edge x0, std::size_t k,
                             std::size_t t) {
    return exact_tau_tail_curve(seq, eta, x0, k, t).back();
}

}  // namespace dcm
