#pragma once

#include <exception>
#include <map>
#include <string>
#include <vector>

#include "asdim/io.hpp"

namespace asdim {

/// A module error tagged with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage(std::move(stage)) {}
    std::string stage;
};

struct PipelineOptions {
    std::size_t n = 1;
    std::size_t levels = 3;
    std::uint64_t seed = 0;  // recorded only; the construction is deterministic
};

struct Bundle {
    std::map<std::string, std::string> files;  // name -> exact file contents
    io::json summary;
    bool pass = true;
};

namespace detail {

template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

}  // namespace detail

/// Ladder, trees, product embedding, membership sweep and envelopes, with a verdict per condition.
inline Bundle run_pipeline(const FiniteMetricSpace& s, const PipelineOptions& opt = {}) {
    using detail::staged;
    Bundle b;
    auto seq = staged("ladder", [&] { return build_cover_sequence(s, opt.n, opt.levels); });
    auto ladder = staged("ladder", [&] { return verify_cover_sequence(s, seq); });
    std::vector<TreeBuild> builds;
    staged("trees", [&] {
        for (std::size_t c = 0; c < seq.colors; ++c) builds.push_back(build_tree(s, seq, c));
        return 0;
    });
    const auto trees = trees_of(builds);
    bool mesh_ok = true;
    for (const auto& t : trees)
        for (std::size_t j = 0; j <= t.top_level(); ++j)
            if (t.mesh(j) != Rational::pow2(static_cast<int>(j))) mesh_ok = false;
    auto e = staged("embed", [&] { return embed_product(s, seq, builds); });
    auto sep = staged("embed", [&] { return check_separation(s, seq, trees, e); });
    std::size_t nonmembers = 0;
    staged("membership", [&] {
        const BaseIndex idx(trees);
        const auto top = top_level(trees);
        for (const auto& p : e.images)
            if (!m_membership(p, trees, idx, 1, top).member) ++nonmembers;
        return 0;
    });
    auto env = staged("envelopes", [&] {
        std::vector<Rational> edges;
        for (const auto& m : seq.m)
            if (m > Rational(0) && (edges.empty() || m > edges.back())) edges.push_back(m);
        return envelopes_at(s, ChainedPoints(trees, e.images), edges);
    });

    b.files["space.json"] = io::dump(io::to_json(s));
    b.files["sequence.json"] = io::dump(io::to_json(s, seq));
    b.files["trees.json"] = io::dump(io::to_json(trees));
    b.files["embedding.json"] = io::dump(io::to_json(s, e));
    b.files["envelopes.csv"] = io::envelope_csv(env);

    b.pass = ladder.all() && mesh_ok && sep.pass && nonmembers == 0;
    io::json sepj = {{"pass", sep.pass}};
    if (!sep.pass) sepj["witness"] = {{"level", sep.level}, {"x", s.id(sep.x)}, {"y", s.id(sep.y)}};
    b.summary = {{"space", s.label()},
                 {"points", s.size()},
                 {"n", opt.n},
                 {"levels", seq.size()},
                 {"seed", opt.seed},
                 {"ladder", io::to_json(ladder)},
                 {"tree_mesh", mesh_ok},
                 {"separation", sepj},
                 {"nonmembers", nonmembers},
                 {"envelopes", io::to_json(env)},
                 {"pass", b.pass}};
    b.files["summary.json"] = io::dump(b.summary);
    return b;
}

}  // namespace asdim
