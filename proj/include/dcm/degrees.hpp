#pragma once

#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dcm/error.hpp"

namespace dcm {

using half_edge = std::uint32_t;
using vertex = std::uint32_t;

/// Half-open range of half-edge indices.
struct half_edge_range {
    half_edge first;
    half_edge last;

    std::uint32_t size() const noexcept { return last - first; }
    bool contains(half_edge x) const noexcept { return x >= first && x < last; }
};

/*
 * Vertex degrees together with the half-edge index space they induce.
 *
 * Half-edges are numbered 0..ell-1 in vertex order, so the half-edges of a
 * vertex v form the contiguous range [offset(v), offset(v+1)). Every accepted
 * sequence has an even total and minimum degree 2.
 */
class DegreeSequence {
public:
    DegreeSequence() = default;

    explicit DegreeSequence(std::vector<std::uint32_t> degrees) : degrees_(std::move(degrees)) {
        if (degrees_.empty()) {
            throw validation_error("degree sequence is empty");
        }
        offsets_.resize(degrees_.size() + 1, 0);
        for (std::size_t v = 0; v < degrees_.size(); ++v) {
            if (degrees_[v] < 2) {
                throw validation_error("vertex " + std::to_string(v) + " has degree " +
                                       std::to_string(degrees_[v]) + "; every degree must be at least 2");
            }
            offsets_[v + 1] = offsets_[v] + degrees_[v];
            if (offsets_[v + 1] > UINT32_MAX / 2) {
                throw validation_error("total degree exceeds the supported half-edge index range");
            }
        }
        if (offsets_.back() % 2 != 0) {
            throw validation_error("total degree " + std::to_string(offsets_.back()) +
                                   " is odd; half-edges cannot be paired");
        }
        owner_.resize(offsets_.back());
        for (vertex v = 0; v < degrees_.size(); ++v) {
            for (std::uint64_t x = offsets_[v]; x < offsets_[v + 1]; ++x) owner_[x] = v;
        }
    }

    std::size_t n() const noexcept { return degrees_.size(); }
    std::size_t ell() const noexcept { return owner_.size(); }
    std::size_t m() const noexcept { return owner_.size() / 2; }

    std::uint32_t degree(vertex v) const { return degrees_.at(v); }
    const std::vector<std::uint32_t>& degrees() const noexcept { return degrees_; }

    vertex owner(half_edge x) const noexcept { return owner_[x]; }

    /// deg(x) = d(v(x)) - 1, the number of onward choices from x's vertex.
    std::uint32_t out_degree(half_edge x) const noexcept { return degrees_[owner_[x]] - 1; }

    half_edge_range siblings_range(vertex v) const noexcept {
        return {static_cast<half_edge>(offsets_[v]), static_cast<half_edge>(offsets_[v + 1])};
    }
    half_edge_range siblings_range_of(half_edge x) const noexcept { return siblings_range(owner_[x]); }

    bool are_siblings(half_edge x, half_edge y) const noexcept {
        return x != y && owner_[x] == owner_[y];
    }

    std::uint32_t max_degree() const noexcept {
        std::uint32_t best = 0;
        for (auto d : degrees_) best = d > best ? d : best;
        return best;
    }
    std::uint32_t min_degree() const noexcept {
        std::uint32_t best = UINT32_MAX;
        for (auto d : degrees_) best = d < best ? d : best;
        return best;
    }

    /// FNV-1a digest of the degree list, hex encoded; used in output provenance.
    std::string digest() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto d : degrees_) {
            for (int b = 0; b < 4; ++b) {
                h ^= (d >> (8 * b)) & 0xffU;
                h *= 0x100000001b3ULL;
            }
        }
        static constexpr char hex[] = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
        return out;
    }

    friend bool operator==(const DegreeSequence& a, const DegreeSequence& b) {
        return a.degrees_ == b.degrees_;
    }

private:
    std::vector<std::uint32_t> degrees_;
    std::vector<std::uint64_t> offsets_;
    std::vector<vertex> owner_;
};

struct RegularityReport {
    double nu = 0.0;
    std::uint32_t max_degree = 0;
    std::uint32_t min_degree = 0;
    bool ell_even = false;
    bool min_degree_ok = false;
};

inline DegreeSequence make_regular(std::size_t n, std::uint32_t d) {
    if (n < 2) throw validation_error("regular sequence needs n >= 2");
    if (d < 2) throw validation_error("regular degree must be at least 2");
    if ((n * d) % 2 != 0) {
        throw validation_error("n*d = " + std::to_string(n * d) + " is odd; half-edges cannot be paired");
    }
    return DegreeSequence(std::vector<std::uint32_t>(n, d));
}

/// Reads whitespace separated positive integers.
inline DegreeSequence load_degrees(std::istream& in) {
    std::vector<std::uint32_t> degrees;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            if (token.front() == '-' || token.front() == '+') throw std::invalid_argument(token);
            value = std::stoull(token, &used);
        } catch (const std::exception&) {
            throw validation_error("degree token '" + token + "' is not a non-negative integer");
        }
        if (used != token.size()) {
            throw validation_error("degree token '" + token + "' is not a non-negative integer");
        }
        if (value > UINT32_MAX) throw validation_error("degree " + token + " is too large");
        degrees.push_back(static_cast<std::uint32_t>(value));
    }
    return DegreeSequence(std::move(degrees));
}

inline DegreeSequence load_degrees(const std::string& text) {
    std::istringstream in(text);
    return load_degrees(in);
}

/// nu = sum d(d-1) / sum d, the mean out-degree of a uniformly chosen half-edge.
inline RegularityReport regularity(const DegreeSequence& seq) {
    RegularityReport report;
    std::uint64_t num = 0;
    std::uint64_t den = 0;
    for (auto d : seq.degrees()) {
        num += static_cast<std::uint64_t>(d) * (d - 1);
        den += d;
    }
    report.nu = static_cast<double>(num) / static_cast<double>(den);
    report.max_degree = seq.max_degree();
    report.min_degree = seq.min_degree();
    report.ell_even = seq.ell() % 2 == 0;
    report.min_degree_ok = report.min_degree >= 2;
    return report;
}

}  // namespace dcm
