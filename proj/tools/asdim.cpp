// Command-line front end. Exit codes: 0 pass, 1 contract-check failure, 2 usage or input error.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asdim/asdim.hpp"

namespace {

using namespace asdim;
using io::json;

struct Global {
    std::string out;
    std::size_t cap = kDefaultPointCap;
    std::string step = "1";
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Bad input files and parameters, as opposed to data that fails a check.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Rational> rational_list(const std::string& text) {
    std::vector<Rational> v;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) v.push_back(Rational::parse(item));
    return v;
}

std::vector<std::int64_t> int_list(const std::string& text) {
    std::vector<std::int64_t> v;
    for (const auto& r : rational_list(text)) {
        if (r.den() != 1) throw InputError("expected integers: " + text);
        v.push_back(r.num());
    }
    return v;
}

class Run {
public:
    explicit Run(const Global& g) : g_(g) {}

    /// Any failure while reading inputs is a usage or input error.
    template <typename F>
    auto input(F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
    }
    FiniteMetricSpace space(const std::string& path) const {
        return input([&] { return io::space_from_json(io::read_json(path), g_.cap); });
    }
    Rational step() const { return Rational::parse(g_.step); }
    std::size_t cap() const { return g_.cap; }
    bool to_stdout() const { return g_.out.empty(); }

    /// Artifacts go to --out; the summary always goes to stdout as well.
    void emit(const std::string& name, const std::string& text) const {
        if (g_.out.empty()) return;
        std::filesystem::create_directories(g_.out);
        io::write_file((std::filesystem::path(g_.out) / name).string(), text);
    }
    int finish(json summary, bool pass) const {
        summary["pass"] = pass;
        summary["seed"] = g_.seed;
        summary["jobs"] = g_.jobs;
        emit("summary.json", io::dump(summary));
        std::cout << io::dump(summary);
        return pass ? 0 : 1;
    }

private:
    const Global& g_;
};

}  // namespace

namespace cmd {

int gen(const Run& run, const std::string& kind, const std::vector<std::string>& params, const std::string& table) {
    GeneratorSpec g{kind, {}, {}, run.step()};
    for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw InputError("parameter must be key=value: " + p);
        g.params[p.substr(0, eq)] = std::stoll(p.substr(eq + 1));
    }
    g.table = int_list(table);
    auto s = generate(g, run.cap());
    const auto text = io::dump(io::to_json(s));
    if (run.to_stdout()) {
        std::cout << text;
        return 0;
    }
    run.emit("space.json", text);
    return run.finish({{"space", s.label()}, {"points", s.size()}}, true);
}

int validate(const Run& run, const std::string& path) {
    auto j = run.input([&] { return io::read_json(path); });
    FiniteMetricSpace s;
    try {
        s = io::space_from_json(j, run.cap());
        check_metric_axioms(s);
    } catch (const Error& e) {
        const bool axiom = dynamic_cast<const NotSquareError*>(&e) || dynamic_cast<const NegativeDistance*>(&e) ||
                           dynamic_cast<const NonzeroDiagonal*>(&e) || dynamic_cast<const AsymmetryError*>(&e) ||
                           dynamic_cast<const TriangleViolation*>(&e);
        if (!axiom) throw InputError(e.what());
        return run.finish({{"space", j.value("label", path)}, {"error", e.what()}}, false);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    return run.finish({{"space", s.label()}, {"points", s.size()}, {"diameter", io::rat(s.diameter())}}, true);
}

int asdim_at_scale(const Run& run, const std::string& path, const std::string& D, const std::string& R) {
    auto s = run.space(path);
    auto res = color_cover_at_scale(s, Rational::parse(D), Rational::parse(R));
    auto check = check_cover(s, res.witness);
    run.emit("cover.json", io::dump(io::to_json(s, res.witness)));
    return run.finish({{"space", s.label()},
                       {"D", D},
                       {"R", R},
                       {"colors_used", res.colors_used},
                       {"dimension_bound", res.dimension_bound()},
                       {"lower_bound", res.lower_bound},
                       {"exact", res.exact},
                       {"cover_ok", check.ok()}},
                      check.ok());
}

int ladder(const Run& run, const std::string& path, std::size_t n, std::size_t levels, const std::string& zero) {
    auto s = run.space(path);
    if (!zero.empty()) {
        auto z = build_zero_ladder(s, rational_list(zero));
        run.emit("zero_ladder.json", io::dump(io::to_json(s, z)));
        return run.finish({{"space", s.label()}, {"levels", z.levels.size()}, {"branching", z.branching},
                           {"whole_at_top", z.whole_at_top}},
                          true);
    }
    auto seq = build_cover_sequence(s, n, levels);
    auto rep = verify_cover_sequence(s, seq);
    run.emit("sequence.json", io::dump(io::to_json(s, seq)));
    json lv = json::array();
    for (std::size_t k = 0; k < seq.size(); ++k)
        lv.push_back({{"d", io::rat(seq.d[k])}, {"m", io::rat(seq.m[k])}, {"blocks", seq.levels[k].blocks.size()}});
    return run.finish({{"space", s.label()}, {"levels", lv}, {"report", io::to_json(rep)}}, rep.all());
}

std::vector<TreeBuild> builds_of(const FiniteMetricSpace& s, const CoverSequence& seq) {
    std::vector<TreeBuild> b;
    for (std::size_t c = 0; c < seq.colors; ++c) b.push_back(build_tree(s, seq, c));
    return b;
}

int trees(const Run& run, const std::string& path, const std::string& seq_path) {
    auto s = run.space(path);
    auto seq = run.input([&] { return io::sequence_from_json(s, io::read_json(seq_path)); });
    auto t = trees_of(builds_of(s, seq));
    bool mesh_ok = true;
    json per = json::array();
    for (const auto& tr : t) {
        json mesh = json::array();
        for (std::size_t j = 0; j <= tr.top_level(); ++j) {
            mesh.push_back(io::rat(tr.mesh(j)));
            if (tr.mesh(j) != Rational::pow2(static_cast<int>(j))) mesh_ok = false;
        }
        per.push_back({{"color", tr.color()}, {"segments", tr.segments().size()}, {"mesh", mesh},
                       {"max_degree", tr.max_degree()}});
    }
    run.emit("trees.json", io::dump(io::to_json(t)));
    return run.finish({{"space", s.label()}, {"trees", per}, {"mesh_ok", mesh_ok}}, mesh_ok);
}

int embed(const Run& run, const std::string& path, const std::string& seq_path) {
    auto s = run.space(path);
    auto seq = run.input([&] { return io::sequence_from_json(s, io::read_json(seq_path)); });
    auto b = builds_of(s, seq);
    auto t = trees_of(b);
    auto e = embed_product(s, seq, b);
    auto sep = check_separation(s, seq, t, e);
    run.emit("trees.json", io::dump(io::to_json(t)));
    run.emit("embedding.json", io::dump(io::to_json(s, e)));
    json j = {{"space", s.label()}, {"separation", sep.pass}};
    if (!sep.pass) j["witness"] = {{"level", sep.level}, {"x", s.id(sep.x)}, {"y", s.id(sep.y)}};
    return run.finish(j, sep.pass);
}

int membership(const Run& run, const std::string& path, const std::string& trees_path, const std::string& emb_path,
               std::size_t lo, std::size_t hi) {
    auto s = run.space(path);
    auto t = run.input([&] { return io::trees_from_json(io::read_json(trees_path)); });
    auto e = run.input([&] { return io::embedding_from_json(s, io::read_json(emb_path)); });
    if (hi == 0) hi = top_level(t);
    const BaseIndex idx(t);
    json fails = json::array();
    for (PointIndex x = 0; x < s.size(); ++x) {
        auto r = m_membership(e.images[x], t, idx, lo, hi);
        if (!r.member) fails.push_back({{"id", s.id(x)}, {"failing_level", *r.failing_level}});
    }
    return run.finish({{"space", s.label()}, {"lo", lo}, {"hi", hi}, {"nonmembers", fails}}, fails.empty());
}

int envelopes_cmd(const Run& run, const std::string& path, const std::string& image_path, const std::string& trees_path,
                  const std::string& width, const std::string& edges) {
    auto s = run.space(path);
    auto j = run.input([&] { return io::read_json(image_path); });
    auto scan = [&](const auto& img) {
        return edges.empty() ? envelopes(s, img, Rational::parse(width)) : envelopes_at(s, img, rational_list(edges));
    };
    DistortionReport r;
    if (j.contains("image")) {
        r = scan(LineImage{run.input([&] { return io::m0_embedding_from_json(s, j); }).image});
    } else {
        if (trees_path.empty()) throw InputError("a product embedding needs --trees");
        auto t = run.input([&] { return io::trees_from_json(io::read_json(trees_path)); });
        r = scan(ChainedPoints(t, run.input([&] { return io::embedding_from_json(s, j); }).images));
    }
    run.emit("envelopes.csv", io::envelope_csv(r));
    if (run.to_stdout()) std::cout << io::envelope_csv(r);
    return run.finish({{"space", s.label()}, {"report", io::to_json(r)}}, r.lipschitz_ok && r.proper_proxy_ok);
}

int nagata(const Run& run, const std::string& path, std::size_t n, const std::string& radii) {
    auto s = run.space(path);
    auto v = nagata_check(s, n, rational_list(radii));
    json rows = json::array();
    bool all = true;
    for (const auto& r : v) {
        json row = {{"r", io::rat(r.r)}, {"holds", r.holds}};
        if (!r.holds) row["counterexample"] = {{"center", s.id(r.center)}, {"points", io::ids_of(s, r.counterexample)}};
        all = all && r.holds;
        rows.push_back(row);
    }
    return run.finish({{"space", s.label()}, {"n", n}, {"verdicts", rows}}, all);
}

struct Truncation {
    TreeFamily trees;
    MTruncation m;
    FiniteMetricSpace space;
};

Truncation truncation(const Run& run, const std::string& trees_path) {
    Truncation t;
    t.trees = run.input([&] { return io::trees_from_json(io::read_json(trees_path)); });
    t.m = build_m_truncation(t.trees, run.step(), run.cap());
    t.space = truncation_space(t.trees, t.m.points, "m_truncation(step=" + run.step().str() + ")");
    return t;
}

int higson(const Run& run, const std::string& trees_path, const std::string& C) {
    auto t = truncation(run, trees_path);
    std::vector<ColoredCover> covers;
    for (std::size_t k = 1; k <= top_level(t.trees); ++k) covers.push_back(higson_cover(t.trees, t.m.points, k));
    auto h = higson_check(t.space, covers, Rational::parse(C));
    json cv = json::array();
    for (const auto& c : covers) cv.push_back(io::to_json(t.space, c));
    run.emit("higson_covers.json", io::dump(cv));
    return run.finish({{"points", t.m.points.size()},
                       {"C", C},
                       {"worst_multiplicity", h.worst_multiplicity},
                       {"worst_level", h.worst_level},
                       {"colors", t.trees.size()}},
                      h.pass);
}

int m0_embed(const Run& run, const std::string& path, const std::string& scales, const std::string& strides) {
    auto s = run.space(path);
    auto sc = rational_list(scales);
    auto z = build_zero_ladder(s, sc);
    std::optional<std::vector<std::size_t>> st;
    if (!strides.empty()) {
        st.emplace();
        for (auto v : int_list(strides)) st->push_back(static_cast<std::size_t>(v));
    }
    auto e = embed_into_m0(s, z, st);
    auto c = check_m0_embedding(s, z, e);
    auto r = envelopes_at(s, LineImage{e.image}, sc);
    run.emit("zero_ladder.json", io::dump(io::to_json(s, z)));
    run.emit("m0_embedding.json", io::dump(io::to_json(s, e)));
    run.emit("envelopes.csv", io::envelope_csv(r));
    return run.finish({{"space", s.label()},
                       {"in_m0", c.in_m0},
                       {"containment", c.containment},
                       {"injective", c.injective},
                       {"witness", c.witness},
                       {"lower_envelope_monotone", r.lower_envelope_monotone}},
                      c.ok());
}

std::vector<std::size_t> indices(const Truncation& t, const std::string& ids) {
    std::vector<std::size_t> v;
    std::stringstream in(ids);
    for (std::string id; std::getline(in, id, ',');)
        if (!id.empty()) v.push_back(t.space.index_of(id));
    return v;
}

int separator(const Run& run, const std::string& trees_path, const std::string& a, const std::string& b, std::size_t j) {
    auto t = truncation(run, trees_path);
    auto r = separator_candidate(t.trees, t.m, indices(t, a), indices(t, b), j);
    auto ids = [&](const std::vector<std::size_t>& v) {
        json out = json::array();
        for (auto i : v) out.push_back(t.space.id(i));
        return out;
    };
    run.emit("separator.json", io::dump({{"U", ids(r.U)}, {"V", ids(r.V)}, {"S", ids(r.S)}}));
    return run.finish({{"points", t.m.points.size()},
                       {"level", j},
                       {"U", r.U.size()},
                       {"V", r.V.size()},
                       {"S", r.S.size()},
                       {"cells", r.cells},
                       {"separates", r.separates}},
                      r.separates);
}

int experiment_mu(const Run& run, const std::string& ks, std::uint64_t node_cap) {
    auto rows = experiment_mu_growth(1, int_list(ks), run.step(), node_cap);
    json out = json::array();
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !certified_le(rows[i - 1].result, rows[i].result)) monotone = false;
        json row = io::to_json(rows[i].result);
        row["k"] = rows[i].k;
        row["points"] = rows[i].points;
        out.push_back(row);
    }
    run.emit("mu_growth.json", io::dump(out));
    return run.finish({{"step", io::rat(run.step())}, {"rows", out}, {"monotone_certified", monotone}}, monotone);
}

int experiment_obstruction_cmd(const Run& run, const std::string& host_path, const std::string& scales,
                               const std::string& ms, std::int64_t r) {
    auto host = run.space(host_path);
    std::vector<ColoredCover> covers;
    for (const auto& D : rational_list(scales)) covers.push_back(brick_wall_cover(host, D));
    auto rep = experiment_obstruction(host, covers, int_list(ms), r, run.step());
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"m", row.m},
                        {"level", row.level},
                        {"supply", row.supply},
                        {"demand", row.demand},
                        {"obstructed", row.obstructed}});
    json j = {{"space", host.label()}, {"supply", rep.supply}, {"rows", rows}};
    j["first_obstructed"] = rep.first_obstructed ? json(*rep.first_obstructed) : json(nullptr);
    run.emit("obstruction.json", io::dump(j));
    return run.finish(j, true);
}

int pipeline(const Run& run, const std::string& path, std::size_t n, std::size_t levels, std::uint64_t seed) {
    auto s = run.space(path);
    auto b = run_pipeline(s, {n, levels, seed});
    for (const auto& [name, text] : b.files)
        if (name != "summary.json") run.emit(name, text);
    return run.finish(b.summary, b.pass);
}

}  // namespace cmd

int main(int argc, char** argv) {
    CLI::App app{"Finite-scale asymptotic dimension and tree-product embeddings"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--out", g.out, "Directory for artifact files");
    app.add_option("--cap", g.cap, "Point cap for generated spaces");
    app.add_option("--step", g.step, "Discretization step p/q");
    app.add_option("--seed", g.seed, "Seed recorded in summaries");
    app.add_option("--jobs", g.jobs, "Worker cap; all stages currently run on one thread")->check(CLI::PositiveNumber);
    Run run(g);
    std::function<int()> action;

    std::string kind, table, space, seq, trees, emb, D = "1", R = "1", zero, width = "1", edges, radii, C = "1/12",
                                                   scales, strides, a, b, ks = "1,2,3", ms = "1,2";
    std::vector<std::string> params;
    std::size_t n = 1, levels = 3, lo = 1, hi = 0, level = 1;
    std::uint64_t node_cap = kMuNodeCap;
    std::int64_t r = 2;

    auto* c_gen = app.add_subcommand("gen", "Generate a canonical example space");
    c_gen->add_option("--kind", kind)->required();
    c_gen->add_option("--param", params, "key=value, repeatable");
    c_gen->add_option("--table", table, "Comma-separated integer table");
    c_gen->callback([&] { action = [&] { return cmd::gen(run, kind, params, table); }; });

    auto* c_val = app.add_subcommand("validate", "Check the metric axioms exactly");
    c_val->add_option("space", space)->required();
    c_val->callback([&] { action = [&] { return cmd::validate(run, space); }; });

    auto* c_dim = app.add_subcommand("asdim", "Colored cover and dimension bound at one scale");
    c_dim->add_option("space", space)->required();
    c_dim->add_option("--D", D);
    c_dim->add_option("--R", R);
    c_dim->callback([&] { action = [&] { return cmd::asdim_at_scale(run, space, D, R); }; });

    auto* c_lad = app.add_subcommand("ladder", "Cover sequence, or a zero-dimensional ladder with --zero");
    c_lad->add_option("space", space)->required();
    c_lad->add_option("--n", n);
    c_lad->add_option("--levels", levels);
    c_lad->add_option("--zero", zero, "Comma-separated scales");
    c_lad->callback([&] { action = [&] { return cmd::ladder(run, space, n, levels, zero); }; });

    auto* c_tree = app.add_subcommand("trees", "Filtered trees of a cover sequence");
    c_tree->add_option("space", space)->required();
    c_tree->add_option("sequence", seq)->required();
    c_tree->callback([&] { action = [&] { return cmd::trees(run, space, seq); }; });

    auto* c_emb = app.add_subcommand("embed", "Product embedding and separation check");
    c_emb->add_option("space", space)->required();
    c_emb->add_option("sequence", seq)->required();
    c_emb->callback([&] { action = [&] { return cmd::embed(run, space, seq); }; });

    auto* c_mem = app.add_subcommand("membership", "Membership of embedded points");
    c_mem->add_option("space", space)->required();
    c_mem->add_option("trees", trees)->required();
    c_mem->add_option("embedding", emb)->required();
    c_mem->add_option("--lo", lo);
    c_mem->add_option("--hi", hi, "Defaults to the top level");
    c_mem->callback([&] { action = [&] { return cmd::membership(run, space, trees, emb, lo, hi); }; });

    auto* c_env = app.add_subcommand("envelopes", "Distortion envelopes of an embedding");
    c_env->add_option("space", space)->required();
    c_env->add_option("image", emb)->required();
    c_env->add_option("--trees", trees, "Needed for product embeddings");
    c_env->add_option("--width", width);
    c_env->add_option("--edges", edges, "Comma-separated bin edges; overrides --width");
    c_env->callback([&] { action = [&] { return cmd::envelopes_cmd(run, space, emb, trees, width, edges); }; });

    auto* c_nag = app.add_subcommand("nagata", "Nagata property check");
    c_nag->add_option("space", space)->required();
    c_nag->add_option("--n", n);
    c_nag->add_option("--radii", radii)->required();
    c_nag->callback([&] { action = [&] { return cmd::nagata(run, space, n, radii); }; });

    auto* c_hig = app.add_subcommand("higson", "Higson covers of an M-truncation");
    c_hig->add_option("trees", trees)->required();
    c_hig->add_option("--C", C);
    c_hig->callback([&] { action = [&] { return cmd::higson(run, trees, C); }; });

    auto* c_m0 = app.add_subcommand("m0-embed", "Embedding of a zero-dimensional space into M0");
    c_m0->add_option("space", space)->required();
    c_m0->add_option("--scales", scales)->required();
    c_m0->add_option("--strides", strides);
    c_m0->callback([&] { action = [&] { return cmd::m0_embed(run, space, scales, strides); }; });

    auto* c_sep = app.add_subcommand("separator", "Separator candidate in an M-truncation");
    c_sep->add_option("trees", trees)->required();
    c_sep->add_option("--a", a, "Comma-separated truncation point ids")->required();
    c_sep->add_option("--b", b, "Comma-separated truncation point ids")->required();
    c_sep->add_option("--level", level);
    c_sep->callback([&] { action = [&] { return cmd::separator(run, trees, a, b, level); }; });

    auto* c_exp = app.add_subcommand("experiment", "Capacity experiments");
    c_exp->require_subcommand(1);
    auto* c_mu = c_exp->add_subcommand("mu", "mu_k growth over X(1, k)");
    c_mu->add_option("--ks", ks);
    c_mu->add_option("--node-cap", node_cap);
    c_mu->callback([&] { action = [&] { return cmd::experiment_mu(run, ks, node_cap); }; });
    auto* c_obs = c_exp->add_subcommand("obstruction", "Host capacity supply against X(m, r) demand");
    c_obs->add_option("host", space)->required();
    c_obs->add_option("--scales", scales)->required();
    c_obs->add_option("--ms", ms);
    c_obs->add_option("--r", r);
    c_obs->callback([&] { action = [&] { return cmd::experiment_obstruction_cmd(run, space, scales, ms, r); }; });

    auto* c_pipe = app.add_subcommand("pipeline", "Ladder, trees, embedding, membership and envelopes");
    c_pipe->add_option("space", space)->required();
    c_pipe->add_option("--n", n);
    c_pipe->add_option("--levels", levels);
    c_pipe->callback([&] { action = [&] { return cmd::pipeline(run, space, n, levels, g.seed); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const BadParameters& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
