// Regenerates the committed oracle fixtures under tests/fixtures.
//
//   make_fixtures <output-dir>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dcm/dcm.hpp"

namespace {

using dcm::json;

void write(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw dcm::io_error("cannot open " + path.string());
    out << j.dump(1) << '\n';
    std::cout << "wrote " << path.string() << '\n';
}

// Same derivation of (eta, x0) as `dcmlab oracle --seed <seed>`.
json walk_fixture(const dcm::DegreeSequence& seq, std::size_t k, std::size_t t, std::uint64_t seed) {
    dcm::ExperimentSpec spec;
    spec.seq = seq;
    spec.k = k;
    spec.master_seed = seed;
    const auto ic = dcm::draw_initial_condition(spec);
    const auto space = dcm::enumerate_configurations(seq);
    dcm::OracleFixture f;
    f.degrees = seq.degrees();
    f.eta = ic.eta.pairing();
    f.x0 = ic.x0;
    f.k = k;
    f.t = t;
    f.distributions = dcm::exact_walk_laws(space, ic.eta, ic.x0, k, t);
    for (const auto& law : f.distributions) f.tv.push_back(dcm::tv_to_uniform(law));
    auto j = dcm::fixture_to_json(f);
    j["seed"] = seed;
    return j;
}

json tau_fixture(const dcm::DegreeSequence& seq, const dcm::Configuration& eta, dcm::half_edge x0, std::size_t k,
                 std::size_t t) {
    dcm::OracleFixture f;
    f.degrees = seq.degrees();
    f.eta = eta.pairing();
    f.x0 = x0;
    f.k = k;
    f.t = t;
    f.tau_tail = dcm::exact_tau_tail_curve(seq, eta, x0, k, t);
    return dcm::fixture_to_json(f);
}

// Self-avoiding segmented path of length t with jumps at T, avoiding the vertices in `taken`.
std::vector<dcm::half_edge> draw_path(const dcm::Configuration& eta, const dcm::DegreeSequence& seq,
                                      const std::vector<std::size_t>& T, std::size_t t, std::vector<bool>& taken,
                                      dcm::rng_type& gen) {
    for (;;) {
        std::vector<dcm::half_edge> path;
        std::vector<dcm::vertex> used;
        auto fresh = [&](dcm::half_edge h) {
            const auto v = seq.owner(h);
            if (taken[v]) return false;
            for (auto u : used) {
                if (u == v) return false;
            }
            return true;
        };
        auto x = static_cast<dcm::half_edge>(dcm::uniform_below(gen, seq.ell()));
        if (!fresh(x)) continue;
        path.push_back(x);
        used.push_back(seq.owner(x));
        bool ok = true;
        for (std::size_t i = 1; i <= t && ok; ++i) {
            dcm::half_edge next;
            if (std::find(T.begin(), T.end(), i) != T.end()) {
                next = static_cast<dcm::half_edge>(dcm::uniform_below(gen, seq.ell()));
            } else {
                next = dcm::walk_step(eta, seq, path.back(), gen);
            }
            ok = fresh(next);
            path.push_back(next);
            used.push_back(seq.owner(next));
        }
        if (!ok) continue;
        for (auto v : used) taken[v] = true;
        return path;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 1;
    }
    try {
        const std::filesystem::path dir = argv[1];
        std::filesystem::create_directories(dir);

        write(dir / "oracle_l10_regular.json", walk_fixture(dcm::make_regular(5, 2), 2, 12, 1));
        write(dir / "oracle_l10_mixed.json", walk_fixture(dcm::DegreeSequence({3, 3, 2, 2}), 2, 12, 2));

        // m = 3: x0 sits on a self-loop so the walk can survive; second fixture has unequal degrees
        const auto ring = dcm::make_regular(3, 2);
        write(dir / "tau_m3_regular.json",
              tau_fixture(ring, dcm::Configuration({1, 0, 4, 5, 2, 3}), 0, 2, 4));
        const dcm::DegreeSequence lopsided({4, 2});
        write(dir / "tau_m3_mixed.json", tau_fixture(lopsided, dcm::Configuration({4, 2, 1, 5, 0, 3}), 1, 2, 4));

        const auto cubic = dcm::make_regular(1000, 3);
        auto gen = dcm::make_stream(2024, 0, dcm::stream_purpose::diagnostics);
        const auto eta = dcm::sample_configuration(cubic, gen);
        const std::vector<std::size_t> T{2};
        const std::size_t t = 4;
        std::vector<bool> taken(cubic.n(), false);
        const auto a = draw_path(eta, cubic, T, t, taken, gen);
        const auto b = draw_path(eta, cubic, T, t, taken, gen);
        json iso;
        iso["regular"] = {1000, 3};
        iso["eta"] = eta.pairing();
        iso["k"] = dcm::alpha_to_k(cubic.m(), 0.1).k;
        iso["t"] = t;
        iso["T"] = T;
        iso["path_a"] = a;
        iso["path_b"] = b;
        write(dir / "isomorphic_paths.json", iso);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
