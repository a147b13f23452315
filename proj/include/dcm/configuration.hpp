#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcm/degrees.hpp"
#include "dcm/error.hpp"
#include "dcm/random.hpp"

namespace dcm {

/*
 * A pairing of half-edges: a fixed-point-free involution on [0, ell).
 *
 * The pairing array may contain self-loops and multi-edges; the multigraph
 * is never conditioned on being simple.
 */
class Configuration {
public:
    Configuration() = default;

    /// Validates involution and absence of fixed points.
    explicit Configuration(std::vector<half_edge> pairing) : pairing_(std::move(pairing)) {
        if (pairing_.size() % 2 != 0) throw validation_error("pairing has odd length");
        for (std::size_t x = 0; x < pairing_.size(); ++x) {
            const auto y = pairing_[x];
            if (y >= pairing_.size()) {
                throw validation_error("pairing[" + std::to_string(x) + "] is out of range");
            }
            if (y == x) throw validation_error("half-edge " + std::to_string(x) + " is paired to itself");
            if (pairing_[y] != x) {
                throw validation_error("pairing is not an involution at half-edge " + std::to_string(x));
            }
        }
    }

    std::size_t ell() const noexcept { return pairing_.size(); }
    std::size_t m() const noexcept { return pairing_.size() / 2; }

    half_edge operator[](half_edge x) const noexcept { return pairing_[x]; }

    /// eta(x), bounds checked.
    half_edge pair_of(half_edge x) const {
        if (x >= pairing_.size()) {
            throw validation_error("half-edge " + std::to_string(x) + " is outside [0, " +
                                   std::to_string(pairing_.size()) + ")");
        }
        return pairing_[x];
    }

    /// Pairs a with b. Callers restore the involution before anyone else reads.
    void link(half_edge a, half_edge b) noexcept {
        pairing_[a] = b;
        pairing_[b] = a;
    }

    bool valid() const noexcept {
        for (std::size_t x = 0; x < pairing_.size(); ++x) {
            const auto y = pairing_[x];
            if (y >= pairing_.size() || y == x || pairing_[y] != x) return false;
        }
        return true;
    }

    const std::vector<half_edge>& pairing() const noexcept { return pairing_; }

    /// Sorted list of (min, max) pairs; equal configurations have equal normal forms.
    std::vector<std::pair<half_edge, half_edge>> edge_set() const {
        std::vector<std::pair<half_edge, half_edge>> edges;
        edges.reserve(m());
        for (half_edge x = 0; x < pairing_.size(); ++x) {
            if (x < pairing_[x]) edges.emplace_back(x, pairing_[x]);
        }
        return edges;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<half_edge> pairing_;
};

/*
 * Uniform perfect matching of `items`, written into `c`.
 *
 * Scanning in ascending order, the smallest unpaired item is matched with an
 * item drawn uniformly from the other unpaired ones. `items` must be sorted
 * ascending and have even length.
 */
template <class URBG>
void pair_uniformly(std::span<const half_edge> items, Configuration& c, URBG& gen) {
    constexpr std::uint32_t gone = UINT32_MAX;
    const std::size_t n = items.size();
    // pool of unpaired local indices with O(1) removal: pool[pos[i]] == i
    std::vector<std::uint32_t> pool(n);
    std::vector<std::uint32_t> pos(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = pos[i] = i;
    std::size_t size = n;
    auto remove = [&](std::uint32_t i) {
        const auto slot = pos[i];
        const auto last = pool[size - 1];
        pool[slot] = last;
        pos[last] = slot;
        pos[i] = gone;
        --size;
    };
    for (std::uint32_t i = 0; i < n; ++i) {
        if (pos[i] == gone) continue;
        remove(i);
        const std::uint32_t j = pool[uniform_below(gen, size)];
        remove(j);
        c.link(items[i], items[j]);
    }
}

/// Uniform sample from the configuration model, self-loops and multi-edges allowed.
template <class URBG>
Configuration sample_configuration(const DegreeSequence& seq, URBG& gen) {
    std::vector<half_edge> all(seq.ell());
    for (half_edge x = 0; x < all.size(); ++x) all[x] = x;
    // start from the identity-free pairing 0-1, 2-3, ... and overwrite every pair
    std::vector<half_edge> scratch(seq.ell());
    for (half_edge x = 0; x < scratch.size(); ++x) scratch[x] = x ^ 1U;
    Configuration c(std::move(scratch));
    pair_uniformly(std::span<const half_edge>(all), c, gen);
    return c;
}

inline half_edge pair_of(const Configuration& c, half_edge x) { return c.pair_of(x); }

/// Number of edges of a that are not edges of b.
inline std::size_t hamming(const Configuration& a, const Configuration& b) {
    if (a.ell() != b.ell()) {
        throw validation_error("hamming: configurations have different half-edge counts (" +
                               std::to_string(a.ell()) + " vs " + std::to_string(b.ell()) + ")");
    }
    std::size_t d = 0;
    for (half_edge x = 0; x < a.ell(); ++x) {
        if (x < a[x] && b[x] != a[x]) ++d;
    }
    return d;
}

struct MultigraphStats {
    std::size_t self_loops = 0;
    std::size_t multi_edge_excess = 0;
};

/// Self-loops, plus edges beyond the first between each pair of distinct vertices.
inline MultigraphStats multigraph_stats(const Configuration& c, const DegreeSequence& seq) {
    if (c.ell() != seq.ell()) throw validation_error("multigraph_stats: configuration does not match degrees");
    MultigraphStats stats;
    std::vector<std::uint64_t> vertex_pairs;
    vertex_pairs.reserve(c.m());
    for (half_edge x = 0; x < c.ell(); ++x) {
        const half_edge y = c[x];
        if (x > y) continue;
        const vertex u = seq.owner(x);
        const vertex v = seq.owner(y);
        if (u == v) {
            ++stats.self_loops;
            continue;
        }
        const std::uint64_t lo = std::min(u, v);
        const std::uint64_t hi = std::max(u, v);
        vertex_pairs.push_back((lo << 32) | hi);
    }
    std::sort(vertex_pairs.begin(), vertex_pairs.end());
    for (std::size_t i = 1; i < vertex_pairs.size(); ++i) {
        if (vertex_pairs[i] == vertex_pairs[i - 1]) ++stats.multi_edge_excess;
    }
    return stats;
}

namespace detail {

__extension__ using u128 = unsigned __int128;

inline bool mul_checked(u128 a, u128 b, u128& out) { return !__builtin_mul_overflow(a, b, &out); }

inline u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u128 binomial_exact(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        // r * (n - i) is divisible by (i + 1) at every step
        u128 next;
        if (!mul_checked(r, n - i, next)) {
            throw scale_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                              ") exceeds exact 128-bit arithmetic");
        }
        r = next / (i + 1);
    }
    return r;
}

inline u128 double_factorial_odd(std::uint64_t k) {
    // (2k-1)!!
    u128 r = 1;
    for (std::uint64_t j = 1; j <= k; ++j) {
        if (!mul_checked(r, 2 * j - 1, r)) {
            throw scale_error("(2k-1)!! exceeds exact 128-bit arithmetic for k = " + std::to_string(k));
        }
    }
    return r;
}

}  // namespace detail

/// Exact value of the one-step kernel for a Hamming distance d.
inline double q_probability_for_distance(std::size_t m, std::size_t k, std::size_t d) {
    if (k < 2 || k > m) {
        throw validation_error("k = " + std::to_string(k) + " outside [2, m] with m = " + std::to_string(m));
    }
    if (d > k) return 0.0;
    using detail::u128;
    u128 num = detail::binomial_exact(m - d, k - d);
    u128 den;
    if (!detail::mul_checked(detail::binomial_exact(m, k), detail::double_factorial_odd(k), den)) {
        throw scale_error("kernel denominator exceeds exact 128-bit arithmetic");
    }
    const u128 g = detail::gcd128(num, den);
    num /= g;
    den /= g;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

/// Probability that one rewiring step with parameter k turns a into b.
inline double q_probability(const Configuration& a, const Configuration& b, std::size_t k) {
    const std::size_t d = hamming(a, b);
    return q_probability_for_distance(a.m(), k, d);
}

}  // namespace dcm
