#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/random.hpp"

namespace dcm {

/*
 * The k-edge rewiring chain started from eta, revealed only where queried.
 *
 * Every step t selects a uniform k-subset of the current edges and pairs the
 * 2k freed half-edges uniformly. Instead of drawing all of that, the process
 * answers "who is h paired to at time t" by deferred decisions:
 *
 *  - whether h's edge at time t-1 is selected at step t is drawn from the
 *    hypergeometric conditional given the edges already revealed at step t
 *    ((k - selected) / (m - selected - kept));
 *  - the new partner of a selected half-edge is uniform over the unmatched
 *    members of R_t, which are either revealed ("dangling") half-edges or
 *    endpoints of the k - selected edges not yet revealed. Picking one of the
 *    latter reveals a fresh uniform edge of C_{t-1} by rejection sampling.
 *
 * The joint law of everything queried is exactly that of the full chain.
 * Work per query is proportional to what it reveals, not to m.
 */
class LocalRewiringProcess {
public:
    LocalRewiringProcess(const Configuration& eta, std::size_t k) : eta_(eta), k_(k), m_(eta.m()) {
        check_k(k, m_);
        states_.resize(eta.ell());
    }

    /// Starts a fresh, independent realisation.
    void reset() {
        if (++epoch_ == 0) {
            for (auto& s : states_) s.stamp = 0;
            epoch_ = 1;
        }
        for (std::size_t t = 1; t <= used_steps_ && t < steps_.size(); ++t) steps_[t].clear();
        used_steps_ = 0;
        events_.clear();
    }

    /// C_t(h).
    template <class URBG>
    half_edge partner_at(half_edge h, std::size_t t, URBG& gen) {
        ensure(h, t, gen);
        const auto& s = state(h);
        if (s.resolved == t) return s.partner;
        half_edge partner = eta_[h];
        for (std::int32_t e = s.head; e >= 0; e = events_[e].next) {
            if (events_[e].time > t) break;
            partner = events_[e].partner;
        }
        return partner;
    }

    /// Whether h belongs to R_{<=t}.
    template <class URBG>
    bool rewired_by(half_edge h, std::size_t t, URBG& gen) {
        ensure(h, t, gen);
        return state(h).first_rewired <= t;
    }

    std::size_t k() const noexcept { return k_; }
    const Configuration& initial() const noexcept { return eta_; }

private:
    static constexpr std::uint32_t never = UINT32_MAX;

    struct HalfEdgeState {
        std::uint32_t stamp = 0;
        std::uint32_t resolved = 0;       // pairing known for all times <= resolved
        half_edge partner = 0;            // partner at time `resolved`
        std::uint32_t dangling_step = 0;  // in R_t with partner at t still open
        std::uint32_t first_rewired = never;
        std::int32_t head = -1;  // partner-change events, ascending in time
        std::int32_t tail = -1;
    };

    struct Event {
        std::uint32_t time;
        half_edge partner;
        std::int32_t next;
    };

    struct StepState {
        std::size_t selected = 0;  // edges revealed as rewired
        std::size_t kept = 0;      // edges revealed as untouched
        std::vector<half_edge> dangling;
        void clear() {
            selected = kept = 0;
            dangling.clear();
        }
    };

    HalfEdgeState& state(half_edge h) {
        auto& s = states_[h];
        if (s.stamp != epoch_) {
            s = HalfEdgeState{};
            s.stamp = epoch_;
            s.partner = eta_[h];
        }
        return s;
    }

    StepState& step_state(std::size_t t) {
        if (t >= steps_.size()) steps_.resize(t + 1);
        used_steps_ = std::max(used_steps_, t);
        return steps_[t];
    }

    template <class URBG>
    void ensure(half_edge h, std::size_t t, URBG& gen) {
        while (state(h).resolved < t) extend(h, gen);
    }

    void mark_rewired(half_edge h, std::uint32_t t) {
        auto& s = state(h);
        s.first_rewired = std::min(s.first_rewired, t);
    }

    // Reveals step resolved(h)+1 for h.
    template <class URBG>
    void extend(half_edge h, URBG& gen) {
        const std::uint32_t t = state(h).resolved + 1;
        if (state(h).dangling_step == t) {
            match(h, t, gen);
            return;
        }
        const half_edge p = state(h).partner;
        StepState& step = step_state(t);
        const std::size_t unrevealed = m_ - step.selected - step.kept;
        const std::size_t wanted = k_ - step.selected;
        if (uniform_below(gen, unrevealed) < wanted) {
            ++step.selected;
            state(h).dangling_step = t;
            state(p).dangling_step = t;
            mark_rewired(h, t);
            mark_rewired(p, t);
            step.dangling.push_back(p);
            match(h, t, gen);
        } else {
            ++step.kept;
            state(h).resolved = t;
            state(p).resolved = t;
        }
    }

    // Draws the step-t partner of h, which must be dangling at step t.
    template <class URBG>
    void match(half_edge h, std::uint32_t t, URBG& gen) {
        {
            auto& list = step_state(t).dangling;
            auto it = std::find(list.begin(), list.end(), h);
            if (it != list.end()) {
                *it = list.back();
                list.pop_back();
            }
        }
        const std::size_t open_revealed = step_state(t).dangling.size();
        const std::size_t open_hidden = 2 * (k_ - step_state(t).selected);
        const std::size_t pick = uniform_below(gen, open_revealed + open_hidden);
        half_edge z;
        if (pick < open_revealed) {
            auto& list = step_state(t).dangling;
            z = list[pick];
            list[pick] = list.back();
            list.pop_back();
        } else {
            // uniform endpoint of a uniform not-yet-revealed edge of C_{t-1}
            for (;;) {
                z = static_cast<half_edge>(uniform_below(gen, eta_.ell()));
                ensure(z, t - 1, gen);
                const auto& s = state(z);
                if (s.resolved < t && s.dangling_step != t) break;
            }
            const half_edge w = state(z).partner;
            ++step_state(t).selected;
            mark_rewired(z, t);
            mark_rewired(w, t);
            state(w).dangling_step = t;
            step_state(t).dangling.push_back(w);
        }
        link(h, z, t);
    }

    void link(half_edge a, half_edge b, std::uint32_t t) {
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            auto& s = state(x);
            s.partner = y;
            s.resolved = t;
            s.dangling_step = 0;
            const auto id = static_cast<std::int32_t>(events_.size());
            events_.push_back({t, y, -1});
            if (s.tail >= 0) {
                events_[s.tail].next = id;
            } else {
                s.head = id;
            }
            s.tail = id;
        }
    }

    const Configuration& eta_;
    std::size_t k_;
    std::size_t m_;
    std::uint32_t epoch_ = 0;
    std::vector<HalfEdgeState> states_;
    std::vector<StepState> steps_;
    std::size_t used_steps_ = 0;
    std::vector<Event> events_;
};

/// Joint (graph, walk) sampler on top of LocalRewiringProcess; same interface as FullJointSampler.
class LocalJointSampler {
public:
    LocalJointSampler(const Configuration& eta, const DegreeSequence& seq, std::size_t k)
        : seq_(seq), process_(eta, k) {
        if (eta.ell() != seq.ell()) throw validation_error("sampler: configuration does not match degrees");
    }

    template <class URBG>
    std::optional<std::size_t> run(half_edge x0, std::size_t steps, URBG& gen, std::vector<half_edge>& positions) {
        process_.reset();
        positions.clear();
        positions.push_back(x0);
        std::optional<std::size_t> tau;
        for (std::size_t t = 1; t <= steps; ++t) {
            const half_edge here = positions.back();
            if (!tau && process_.rewired_by(here, t, gen)) tau = t;
            const half_edge landing = process_.partner_at(here, t, gen);
            const auto range = seq_.siblings_range_of(landing);
            half_edge next = range.first + static_cast<half_edge>(uniform_below(gen, range.size() - 1));
            if (next >= landing) ++next;
            positions.push_back(next);
        }
        return tau;
    }

    LocalRewiringProcess& process() noexcept { return process_; }
    const DegreeSequence& degrees() const noexcept { return seq_; }

private:
    const DegreeSequence& seq_;
    LocalRewiringProcess process_;
};

}  // namespace dcm
