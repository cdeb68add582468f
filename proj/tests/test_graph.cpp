#include <catch2/catch_amalgamated.hpp>

#include <seqproc/graph.hpp>

#include <set>

using namespace seqproc;

namespace {

// Oracle: every table over the tuple space, kept when monotone.  Works
// straight off the comparable index pairs, independent of FunGraph's
// constructors and of the closure.
std::vector<std::vector<NatBot>> all_monotone_tables(int n, int k) {
    const std::uint64_t total = tuple_count(n, k);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> comparable;
    for (std::uint64_t a = 0; a < total; ++a)
        for (std::uint64_t b = 0; b < total; ++b)
            if (a != b && tuple_leq_by_index(n, k, a, b))
                comparable.push_back({static_cast<std::uint32_t>(a),
                                      static_cast<std::uint32_t>(b)});
    std::vector<std::vector<NatBot>> out;
    std::vector<int> digits(total, 0);
    for (;;) {
        bool mono = true;
        for (auto [a, b] : comparable)
            if (digits[a] != 0 && digits[a] != digits[b]) {
                mono = false;
                break;
            }
        if (mono) {
            std::vector<NatBot> t(total);
            for (std::uint64_t i = 0; i < total; ++i)
                t[i] = digits[i] == 0 ? NatBot::bot() : NatBot::of(digits[i] - 1);
            out.push_back(std::move(t));
        }
        std::uint64_t i = 0;
        while (i < total && digits[i] == k + 1) digits[i++] = 0;
        if (i == total) break;
        ++digits[i];
    }
    return out;
}

const SeqCatalog& cat11() {
    static SeqCatalog c = enumerate_sequentials(1, 1);
    return c;
}

}  // namespace

TEST_CASE("denotation tabulates evaluation, truncated to the cap", "[graph]") {
    ProcPtr p = parse_proc("case x1(0){0 => 0}");
    FunGraph g = denote(p, 1, 1);
    const auto& space = tuple_space(1, 1);
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        NatBot expected = space[i].at(1).apply(NatBot::of(0)) == NatBot::of(0)
                              ? NatBot::of(0)
                              : NatBot::bot();
        CHECK(g.at(i) == expected);
    }
    CHECK(is_monotone(g));
    // Constants above the cap truncate to bot.
    CHECK(denote(Proc::constant(5), 1, 1) == FunGraph::bottom(1, 1));
    CHECK(denote(Proc::constant(1), 1, 1) == FunGraph::constant(1, 1, NatBot::of(1)));
}

TEST_CASE("denotation is compositional through case_combine", "[graph]") {
    Rng rng(21);
    int checked = 0;
    while (checked < 40) {
        ProcPtr p = random_proc(rng, 2, 1, 3);
        if (!p->is_case()) continue;
        ++checked;
        std::vector<std::optional<FunGraph>> branches(2);
        for (const auto& [label, body] : p->branches())
            if (label <= 1) branches[label] = denote(body, 2, 1);
        FunGraph direct = denote(p, 2, 1);
        FunGraph combined = case_combine(p->var(), denote(p->query(), 2, 1), branches);
        REQUIRE(direct == combined);
    }
}

TEST_CASE("denotations at different caps cohere", "[graph]") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        ProcPtr raw = random_proc(rng, 2, 2, 3);
        // Once the term's numerals fit in the smaller cap, the larger-cap
        // denotation is exactly the embedding of the smaller one.
        ProcPtr p = project_proc(raw, 1);
        CHECK(embed_fun(denote(p, 2, 1), 2) == denote(p, 2, 2));
        // And projecting the term tracks projecting the graph.
        CHECK(project_fun(denote(raw, 2, 2), 1) == denote(project_proc(raw, 1), 2, 1));
    }
}

TEST_CASE("embed and project are a section and retraction", "[graph]") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        FunGraph f = denote(random_proc(rng, 1, 1, 3), 1, 1);
        CHECK(project_fun(embed_fun(f, 3), 1) == f);
        CHECK(graph_leq(embed_fun(project_fun(f, 0), 1), f));
        CHECK(is_monotone(embed_fun(f, 2)));
    }
}

TEST_CASE("strictified graphs answer as on the largest strict minorant", "[graph]") {
    // Oracle: scan every tuple below v that is strict on S; monotonicity
    // forces all numeric answers there to agree, and the strictified value
    // must be exactly that answer (or bot when none exists).
    auto check_against_scan = [](const FunGraph& f, StrictSet s) {
        const auto& space = tuple_space(f.arity(), f.cap());
        FunGraph d = strictify_graph(f, s);
        for (std::uint64_t vi = 0; vi < space.size(); ++vi) {
            NatBot found = NatBot::bot();
            for (std::uint64_t gi = 0; gi < space.size(); ++gi) {
                if (!tuple_leq_by_index(f.arity(), f.cap(), gi, vi)) continue;
                bool strict_on_s = true;
                for (int i = 1; i <= f.arity(); ++i)
                    if (s.contains(i) && !space[gi].at(i).is_strict()) strict_on_s = false;
                if (!strict_on_s) continue;
                NatBot val = f.at(gi);
                if (val.is_num()) {
                    REQUIRE((found.is_bot() || found == val));
                    found = val;
                }
            }
            REQUIRE(d.at(vi) == found);
        }
    };

    for (const auto& m : cat11().members)
        for (StrictSet s : all_strict_sets(1)) check_against_scan(m.graph, s);

    Rng rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        FunGraph f = denote(random_proc(rng, 2, 1, 3), 2, 1);
        for (StrictSet s : all_strict_sets(2)) check_against_scan(f, s);
    }

    // A constant functional ignores its argument, so strictifying the
    // argument changes nothing; a functional reading its oracle's bot
    // value collapses.
    FunGraph c = FunGraph::constant(1, 1, NatBot::of(0));
    CHECK(strictify_graph(c, StrictSet::of({1})) == c);
    FunGraph probe = denote(parse_proc("case x1(bot){0 => 0; 1 => 1}"), 1, 1);
    FunGraph ps = strictify_graph(probe, StrictSet::of({1}));
    CHECK(ps == FunGraph::bottom(1, 1));
    CHECK(ps != probe);
    CHECK(strictify_graph(ps, StrictSet::of({1})) == ps);
}

TEST_CASE("the catalog at arity 1 cap 0 is every monotone functional", "[graph]") {
    SeqCatalog cat = enumerate_sequentials(1, 0);
    CHECK(cat.complete);
    CHECK(cat.size() == 4);
    auto oracle = all_monotone_tables(1, 0);
    REQUIRE(oracle.size() == 4);
    for (auto& t : oracle) CHECK(cat.find(FunGraph(1, 0, t)) != nullptr);
    for (const auto& m : cat.members) CHECK(denote(m.witness, 1, 0) == m.graph);
}

TEST_CASE("the catalog at arity 1 cap 1 is complete with 355 members", "[graph]") {
    const SeqCatalog& cat = cat11();
    CHECK(cat.complete);
    CHECK(cat.size() == 355);
    for (const auto& m : cat.members) {
        CHECK(denote(m.witness, 1, 1) == m.graph);
        CHECK(is_monotone(m.graph));
    }
    // Closed under denotation: every term of up to 2 case nodes lands in it.
    ProcEnumerator gen(1, 1);
    gen.for_each(2, [&](const ProcPtr& p) {
        REQUIRE(cat.find(denote(p, 1, 1)) != nullptr);
    });
}

TEST_CASE("undersized budgets yield an honest partial catalog", "[graph]") {
    SeqCatalog cat = enumerate_sequentials(1, 1, {.max_members = 10, .max_rounds = 64});
    CHECK_FALSE(cat.complete);
    CHECK(cat.size() >= 10);
    for (const auto& m : cat.members) CHECK(denote(m.witness, 1, 1) == m.graph);
    CHECK(is_sequential(FunGraph::bottom(1, 1), cat).status == SeqDecision::Status::Yes);
    // A miss against a partial catalog proves nothing.
    SeqCatalog tiny = enumerate_sequentials(1, 1, {.max_members = 3, .max_rounds = 1});
    FunGraph h = denote(parse_proc("case x1(0){0 => 0}"), 1, 1);
    if (!tiny.find(h))
        CHECK(is_sequential(h, tiny).status == SeqDecision::Status::Unknown);
}

TEST_CASE("a pointwise join of computable functionals need not be computable", "[graph]") {
    FunGraph f = denote(parse_proc("case x1(0){0 => 0}"), 1, 1);
    FunGraph g = denote(parse_proc("case x1(1){0 => 0}"), 1, 1);
    auto h = graph_lub(f, g);
    REQUIRE(h.has_value());
    CHECK(is_monotone(*h));
    CHECK(is_sequential(*h, cat11()).status == SeqDecision::Status::No);

    auto lub = seq_lub(f, g, cat11());
    REQUIRE(lub.status == LubOutcome::Status::Value);
    CHECK(lub.least->graph == FunGraph::constant(1, 1, NatBot::of(0)));
    // The pointwise join is strictly below the least computable bound.
    CHECK(graph_leq(*h, lub.least->graph));
    CHECK(*h != lub.least->graph);
}

TEST_CASE("least upper bound search: identity, conflicts, ties", "[graph]") {
    const SeqCatalog& cat = cat11();
    for (size_t i = 0; i < cat.size(); i += 37) {
        auto self = seq_lub(cat.members[i].graph, cat.members[i].graph, cat);
        REQUIRE(self.status == LubOutcome::Status::Value);
        CHECK(self.least->graph == cat.members[i].graph);
    }

    auto conflict = seq_lub(FunGraph::constant(1, 1, NatBot::of(0)),
                            FunGraph::constant(1, 1, NatBot::of(1)), cat);
    CHECK(conflict.status == LubOutcome::Status::None);

    // Tie detection, exercised on a handcrafted catalog: two incomparable
    // minimal upper bounds and nothing between.
    auto table_with = [](std::initializer_list<std::pair<int, int>> vals) {
        std::vector<NatBot> t(tuple_count(1, 1), NatBot::bot());
        for (auto [i, v] : vals) t[i] = NatBot::of(v);
        return FunGraph(1, 1, std::move(t));
    };
    SeqCatalog fake;
    fake.arity = 1;
    fake.cap = 1;
    fake.complete = true;
    fake.add(table_with({{0, 0}}), Proc::bottom());
    fake.add(table_with({{1, 1}}), Proc::bottom());
    fake.add(table_with({{0, 0}, {1, 1}, {2, 0}}), Proc::bottom());
    fake.add(table_with({{0, 0}, {1, 1}, {2, 1}}), Proc::bottom());
    auto tie = seq_lub(table_with({{0, 0}}), table_with({{1, 1}}), fake);
    CHECK(tie.status == LubOutcome::Status::NoLeast);
    CHECK(tie.minimal.size() == 2);

    FunGraph bot11 = FunGraph::bottom(1, 1);
    CHECK_THROWS_AS(seq_lub(bot11, bot11, enumerate_sequentials(1, 1, {.max_members = 3})),
                    std::invalid_argument);
}

TEST_CASE("graph text form round-trips and rejects junk", "[graph]") {
    Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        FunGraph f = denote(random_proc(rng, 2, 1, 3), 2, 1);
        CHECK(parse_graph(to_string(f)) == f);
    }
    // Sparse input: missing indices are bot.
    FunGraph sparse = parse_graph("graph n=1 k=0\n0 -> 0\n");
    CHECK(sparse.at(0) == NatBot::of(0));
    CHECK(sparse.at(1) == NatBot::bot());
    CHECK(sparse.at(2) == NatBot::bot());

    CHECK_THROWS_AS(parse_graph("0 -> 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph n=1 k=0\n9 -> 0\n"), ParseError);
    // index 2 is the everywhere-bot oracle, index 0 the constant 0: giving
    // the former a value above the latter's breaks monotonicity.
    CHECK_THROWS_AS(parse_graph("graph n=1 k=1\n2 -> 0\n0 -> bot\n"), std::invalid_argument);
}

TEST_CASE("catalog text form round-trips and is validated on input", "[graph]") {
    SeqCatalog cat = enumerate_sequentials(1, 0);
    std::string text = to_string(cat);
    SeqCatalog back = parse_catalog(text);
    CHECK(back.arity == cat.arity);
    CHECK(back.cap == cat.cap);
    CHECK(back.complete == cat.complete);
    REQUIRE(back.size() == cat.size());
    for (size_t i = 0; i < cat.size(); ++i) {
        CHECK(back.members[i].graph == cat.members[i].graph);
        CHECK(proc_equal(back.members[i].witness, cat.members[i].witness));
    }
    // A witness that does not compute its row is rejected.
    std::string bad = text;
    auto pos = bad.find("witness: bot");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 12, "witness: 0  ");
    CHECK_THROWS_AS(parse_catalog(bad), std::invalid_argument);
}
