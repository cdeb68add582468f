#include <catch2/catch_amalgamated.hpp>

#include <seqproc/path.hpp>

using namespace seqproc;

namespace {

FunGraph const_query(int arity, int cap, int c) {
    return FunGraph::constant(arity, cap, NatBot::of(c));
}

bool path_eq(const Path& a, const Path& b) {
    if (a.arity != b.arity || a.cap != b.cap || a.strict != b.strict ||
        a.items.size() != b.items.size())
        return false;
    for (size_t i = 0; i < a.items.size(); ++i)
        if (!(a.items[i].query == b.items[i].query) ||
            a.items[i].answer != b.items[i].answer)
            return false;
    return true;
}

// Record the interactions of a normal-form term against a concrete tuple,
// stopping at the first bot answer; an oracle for paths that the term
// itself would walk.
Path simulate(const ProcPtr& p, const ArgTuple& v, StrictSet s) {
    Path path{v.arity(), v.cap(), s, {}};
    ProcPtr cur = p;
    while (cur->is_case()) {
        SQuery q;
        q.var = cur->var();
        if (s.contains(q.var))
            q.payload = cur->query()->value().num();
        else
            q.payload = strictify_graph(denote(cur->query(), v.arity(), v.cap()),
                                        s.with(q.var));
        NatBot ans = query_answer(q, v);
        if (ans.is_bot()) break;
        path.items.push_back({q, ans.num()});
        const ProcPtr* body = cur->branch(ans.num());
        if (!body) break;
        cur = *body;
    }
    return path;
}

}  // namespace

TEST_CASE("matching counts recorded answers", "[path]") {
    // One item: position 1 asked at the constant-0 functional, answered 0.
    Path path{1, 1, StrictSet::empty(), {{{1, const_query(1, 1, 0)}, 0}}};
    REQUIRE(is_path(path));
    auto hits = matching_indices(path, 1);
    CHECK(hits.size() == 4);  // exactly the f with f(0) = 0
    for (auto i : hits) CHECK(tuple_space(1, 1)[i].at(1).apply(NatBot::of(0)) == NatBot::of(0));
    CHECK(path_consistent(path));

    // An unmatchable pair of items.
    Path clash = path;
    clash.items.push_back({{1, const_query(1, 1, 0)}, 1});
    CHECK(matching_indices(clash, 1).empty());
    CHECK_FALSE(path_consistent(clash));
}

TEST_CASE("numeral queries above the cap resolve through the bot value", "[path]") {
    // Position 1 is strict; the numeral 2 exceeds cap 1, so only oracles
    // answering at bot -- the constants -- can match.
    Path path{1, 1, StrictSet::of({1}), {{{1, 2}, 0}}};
    REQUIRE(is_path(path));
    auto hits = matching_indices(path, 1);
    REQUIRE(hits.size() == 1);
    CHECK(tuple_space(1, 1)[hits[0]].at(1) == MonoFn::constant(1, 0));
}

TEST_CASE("matching is invariant under projecting the path", "[path]") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        // Random two-item path at cap 2 with strictified functional payloads.
        StrictSet s = trial % 2 ? StrictSet::of({2}) : StrictSet::empty();
        Path path{2, 2, s, {}};
        for (int j = 0; j < 2; ++j) {
            SQuery q;
            q.var = 1 + static_cast<int>(rng_below(rng, 2));
            if (s.contains(q.var)) {
                q.payload = static_cast<int>(rng_below(rng, 4));
            } else {
                FunGraph g = denote(random_proc(rng, 2, 2, 2), 2, 2);
                q.payload = strictify_graph(g, s.with(q.var));
            }
            path.items.push_back({q, static_cast<int>(rng_below(rng, 3))});
        }
        REQUIRE(is_path(path));
        REQUIRE(payloads_strictified(path));
        // Note: `low` stays structurally valid but need not keep the
        // strictified-payload convention; truncation does not commute with
        // strictification.
        Path low = project_path(path, 1);
        REQUIRE(is_path(low));
        for (const ArgTuple& v : tuple_space(2, 1))
            REQUIRE(matches(v, path) == matches(v, low));
    }
}

TEST_CASE("running a term against a path follows recorded answers", "[path]") {
    ProcPtr p = parse_proc("case x1(0){0 => case x1(1){1 => 2}}");
    FunGraph q0 = const_query(1, 2, 0), q1 = const_query(1, 2, 1);
    Path full{1, 2, StrictSet::empty(), {{{1, q0}, 0}, {{1, q1}, 1}}};
    PathEvalResult r = eval_on_path(p, full);
    CHECK(r.stop == PathEvalResult::Stop::Value);
    CHECK(r.value == NatBot::of(2));

    // Missing second answer: the run halts at that query.
    Path half{1, 2, StrictSet::empty(), {{{1, q0}, 0}}};
    r = eval_on_path(p, half);
    CHECK(r.stop == PathEvalResult::Stop::Unanswered);
    CHECK(r.query.var == 1);
    CHECK(r.query.graph() == strictify_graph(q1, StrictSet::of({1})));
    CHECK(proc_equal(r.halted_at, Proc::constant(1)));

    // An answer the term has no branch for is bot.
    Path off{1, 2, StrictSet::empty(), {{{1, q0}, 1}}};
    r = eval_on_path(p, off);
    CHECK(r.stop == PathEvalResult::Stop::BotLeaf);

    // Earlier items win when two could answer the same query.
    Path dup{1, 2, StrictSet::empty(), {{{1, q0}, 1}, {{1, q0}, 0}}};
    CHECK(eval_on_path(p, dup).stop == PathEvalResult::Stop::BotLeaf);

    // Strict positions answer numeral queries.
    ProcPtr sp = parse_proc("case x1(2){0 => 1}");
    Path strict{1, 2, StrictSet::of({1}), {{{1, 2}, 0}}};
    r = eval_on_path(sp, strict);
    CHECK(r.stop == PathEvalResult::Stop::Value);
    CHECK(r.value == NatBot::of(1));

    // Terms not in normal form for the strict set are refused.
    CHECK_THROWS_AS(eval_on_path(parse_proc("case x1(bot){}"), strict),
                    std::invalid_argument);
}

TEST_CASE("items below the query functional still answer it", "[path]") {
    // The term asks at the constant-0 functional.  The recorded item carries
    // a strictly smaller payload: 0 only where the oracle is defined at 0,
    // bot elsewhere.  Every matching oracle must answer both points alike,
    // so the recorded answer decides the branch.
    ProcPtr p = parse_proc("case x1(0){0 => 7}");
    FunGraph below = FunGraph::from_fn(1, 1, [](const ArgTuple& v) {
        return v.at(1).apply(NatBot::of(0)).is_num() ? NatBot::of(0) : NatBot::bot();
    });
    FunGraph exact = const_query(1, 1, 0);
    REQUIRE(graph_leq(below, exact));
    REQUIRE_FALSE(below == exact);

    Path recorded{1, 1, StrictSet::empty(), {{{1, below}, 0}}};
    PathEvalResult r = eval_on_path(p, recorded);
    CHECK(r.stop == PathEvalResult::Stop::Value);
    CHECK(r.value == NatBot::of(7));

    // A payload that is not below the query functional does not answer it.
    FunGraph sideways = const_query(1, 1, 1);
    Path other{1, 1, StrictSet::empty(), {{{1, sideways}, 0}}};
    CHECK(eval_on_path(p, other).stop == PathEvalResult::Stop::Unanswered);
}

TEST_CASE("find_critical returns the blocking query", "[path]") {
    ProcPtr p = parse_proc("case x1(0){0 => 0}");
    Path empty{1, 1, StrictSet::empty(), {}};
    SQuery q = find_critical(p, empty);
    CHECK(q.var == 1);
    CHECK(q.graph() == strictify_graph(const_query(1, 1, 0), StrictSet::of({1})));

    Path answered{1, 1, StrictSet::empty(), {{q, 0}}};
    CHECK_THROWS_AS(find_critical(p, answered), std::logic_error);
}

TEST_CASE("criticality separates necessary queries from optional ones", "[path]") {
    FunGraph f = denote(parse_proc("case x1(0){0 => 0}"), 1, 1);
    Path empty{1, 1, StrictSet::empty(), {}};
    SQuery at0{1, const_query(1, 1, 0)};
    SQuery at1{1, const_query(1, 1, 1)};
    CHECK(is_critical(f, empty, at0));
    CHECK_FALSE(is_critical(f, empty, at1));
    // Everything is critical for the bottom functional.
    CHECK(is_critical(FunGraph::bottom(1, 1), empty, at1));
}

TEST_CASE("criticality is antitone in the functional", "[path]") {
    Rng rng(42);
    Path empty{2, 1, StrictSet::empty(), {}};
    int informative = 0;
    for (int trial = 0; trial < 60; ++trial) {
        ProcPtr p = random_proc(rng, 2, 1, 3);
        if (!p->is_case() || p->branches().empty()) continue;
        FunGraph big = denote(p, 2, 1);
        // Dropping a branch only loses behaviour.
        BranchList fewer(p->branches().begin(), p->branches().end() - 1);
        FunGraph small = denote(Proc::make_case(p->var(), p->query(), std::move(fewer)), 2, 1);
        REQUIRE(graph_leq(small, big));
        SQuery q{1 + static_cast<int>(rng_below(rng, 2)),
                 strictify_graph(denote(random_proc(rng, 2, 1, 2), 2, 1),
                                 StrictSet::empty())};
        q.payload = strictify_graph(std::get<FunGraph>(q.payload), StrictSet::of({q.var}));
        if (is_critical(big, empty, q)) {
            CHECK(is_critical(small, empty, q));
            ++informative;
        }
    }
    CHECK(informative > 0);
}

TEST_CASE("a blocked run halts at a critical query", "[path]") {
    Rng rng(43);
    int blocked = 0;
    for (int trial = 0; trial < 120 && blocked < 40; ++trial) {
        StrictSet s = trial % 2 ? StrictSet::of({1}) : StrictSet::empty();
        ProcPtr p = snormalize(random_proc(rng, 2, 1, 3), s);
        const auto& space = tuple_space(2, 1);
        ArgTuple v = space[rng_below(rng, space.size())];
        Path path = simulate(p, v, s);
        if (!path.items.empty()) path.items.pop_back();
        PathEvalResult r = eval_on_path(p, path);
        if (r.stop != PathEvalResult::Stop::Unanswered) continue;
        ++blocked;
        FunGraph d = strictify_graph(denote(p, 2, 1), s);
        CHECK(is_critical(d, path, r.query));
    }
    CHECK(blocked >= 20);
}

TEST_CASE("path structural validation", "[path]") {
    CHECK(path_error(Path{1, 1, StrictSet::of({1}), {{{1, const_query(1, 1, 0)}, 0}}})
              .has_value());  // strict position with a functional query
    CHECK(path_error(Path{1, 1, StrictSet::empty(), {{{1, 0}, 0}}}).has_value());
    CHECK(path_error(Path{1, 1, StrictSet::empty(), {{{3, const_query(1, 1, 0)}, 0}}})
              .has_value());
    // The strictified-payload convention is checkable separately and does
    // not affect structural validity.
    FunGraph raw = denote(parse_proc("case x1(bot){0 => 0; 1 => 1}"), 1, 1);
    CHECK(raw != strictify_graph(raw, StrictSet::of({1})));
    Path unconventional{1, 1, StrictSet::empty(), {{{1, raw}, 0}}};
    CHECK_FALSE(path_error(unconventional).has_value());
    CHECK_FALSE(payloads_strictified(unconventional));
}

TEST_CASE("path text form round-trips through its graph list", "[path]") {
    Rng rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        StrictSet s = trial % 2 ? StrictSet::of({2}) : StrictSet::empty();
        ProcPtr p = snormalize(random_proc(rng, 2, 1, 3), s);
        ArgTuple v = tuple_space(2, 1)[rng_below(rng, tuple_count(2, 1))];
        Path path = simulate(p, v, s);
        std::vector<FunGraph> graphs = path_graphs(path);
        std::string graph_text;
        for (const FunGraph& g : graphs) graph_text += to_string(g);
        Path back = parse_path(to_string(path), parse_graph_list(graph_text));
        REQUIRE(path_eq(back, path));
    }
    CHECK_THROWS_AS(parse_path("i=1 G=0 b=0\n", {}), ParseError);
    CHECK_THROWS_AS(parse_path("path n=1 k=1 S={}\ni=1 G=@0 b=0\n", {}), ParseError);
}

TEST_CASE("criticality projection diagnostic agrees with per-cap checks", "[path]") {
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        FunGraph f = denote(random_proc(rng, 1, 2, 3), 1, 2);
        Path empty{1, 2, StrictSet::empty(), {}};
        SQuery q{1, strictify_graph(denote(random_proc(rng, 1, 2, 2), 1, 2),
                                    StrictSet::of({1}))};
        auto failing = check_criticality_projection(f, empty, q);
        if (failing) {
            SQuery qk = q;
            qk.payload = project_fun(q.graph(), *failing);
            CHECK_FALSE(is_critical(project_fun(f, *failing),
                                    project_path(empty, *failing), qk));
        } else {
            CHECK(is_critical(f, empty, q));
        }
    }
}
