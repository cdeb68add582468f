#include <catch2/catch_amalgamated.hpp>

#include <seqproc/flat.hpp>

#include <set>
#include <vector>

using namespace seqproc;

namespace {

// Oracle: enumerate every map {bot,0..k} -> {bot,0..k} as a raw value
// vector (entry 0 = value at bot) and keep the monotone ones.  In the flat
// order the only comparable distinct pairs are (bot, x), so monotonicity
// is exactly: value-at-bot numeric implies all entries equal it.  The
// construction is independent of MonoFn's representation and invariant
// checks.
std::vector<std::vector<NatBot>> all_monotone_maps(int k) {
    const int vals = k + 2;  // bot plus 0..k
    const int slots = k + 2;
    std::vector<std::vector<NatBot>> out;
    std::vector<int> digits(slots, 0);
    for (;;) {
        std::vector<NatBot> m(slots);
        for (int i = 0; i < slots; ++i)
            m[i] = digits[i] == 0 ? NatBot::bot() : NatBot::of(digits[i] - 1);
        bool mono = true;
        if (m[0].is_num())
            for (int i = 1; i < slots; ++i)
                if (m[i] != m[0]) mono = false;
        if (mono) out.push_back(std::move(m));
        int i = slots - 1;
        while (i >= 0 && digits[i] == vals - 1) digits[i--] = 0;
        if (i < 0) break;
        ++digits[i];
    }
    return out;
}

std::vector<NatBot> raw_of(const MonoFn& f) {
    std::vector<NatBot> m;
    m.push_back(f.at_bot());
    for (NatBot v : f.table()) m.push_back(v);
    return m;
}

}  // namespace

TEST_CASE("monotone function counts match the filtered full map space", "[flat]") {
    CHECK(monofn_count(0) == 3);
    CHECK(monofn_count(1) == 11);
    CHECK(monofn_count(2) == 67);
    for (int k = 0; k <= 2; ++k) {
        auto oracle = all_monotone_maps(k);
        auto space = enumerate_monofns(k);
        REQUIRE(space.size() == oracle.size());
        std::set<std::vector<int>> seen, expect;
        for (const auto& m : oracle) {
            std::vector<int> key;
            for (NatBot v : m) key.push_back(v.code());
            expect.insert(key);
        }
        for (const auto& f : space) {
            std::vector<int> key;
            for (NatBot v : raw_of(f)) key.push_back(v.code());
            seen.insert(key);
        }
        CHECK(seen == expect);
    }
}

TEST_CASE("canonical enumeration: constants first, then strict in lex order", "[flat]") {
    auto space = enumerate_monofns(1);
    CHECK(space[0] == MonoFn::constant(1, 0));
    CHECK(space[1] == MonoFn::constant(1, 1));
    // First strict function is everywhere-bot, the global bottom.
    CHECK(space[2] == MonoFn::bottom(1));
    // Last is the strict function with the lexicographically largest table.
    CHECK(space.back() == MonoFn::strict(1, {NatBot::of(1), NatBot::of(1)}));
    for (std::uint64_t i = 0; i < space.size(); ++i)
        CHECK(monofn_index(space[i]) == i);
}

TEST_CASE("flatness invariant is enforced", "[flat]") {
    CHECK_THROWS_AS(MonoFn(1, NatBot::of(0), {NatBot::of(0), NatBot::of(1)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MonoFn(1, NatBot::of(2), {NatBot::of(2), NatBot::of(2)}),
                    std::invalid_argument);  // value above cap
    CHECK_NOTHROW(MonoFn(1, NatBot::bot(), {NatBot::of(1), NatBot::bot()}));
}

TEST_CASE("apply answers the bot value above the cap", "[flat]") {
    MonoFn f = MonoFn::strict(1, {NatBot::of(1), NatBot::bot()});
    CHECK(f.apply(NatBot::of(0)) == NatBot::of(1));
    CHECK(f.apply(NatBot::of(5)) == NatBot::bot());
    MonoFn c = MonoFn::constant(1, 1);
    CHECK(c.apply(NatBot::of(7)) == NatBot::of(1));
    // Consistency with the canonical embedding.
    MonoFn fe = embed_monofn(f, 4);
    for (int x = -1; x <= 6; ++x) {
        NatBot v = x < 0 ? NatBot::bot() : NatBot::of(x);
        CHECK(f.apply(v) == fe.apply(v));
    }
}

TEST_CASE("ordering and lub on functions", "[flat]") {
    MonoFn partial = parse_monofn("fn(bot=bot; 0=1,1=bot)");
    MonoFn full = parse_monofn("fn(bot=1; 0=1,1=1)");
    CHECK(mono_leq(partial, full));
    CHECK_FALSE(mono_leq(full, partial));

    CHECK_FALSE(mono_lub(MonoFn::constant(1, 0), MonoFn::constant(1, 1)).has_value());
    auto joined = mono_lub(MonoFn::strict(1, {NatBot::of(0), NatBot::bot()}),
                           MonoFn::strict(1, {NatBot::bot(), NatBot::of(1)}));
    REQUIRE(joined.has_value());
    CHECK(*joined == MonoFn::strict(1, {NatBot::of(0), NatBot::of(1)}));

    // lub is a least upper bound whenever it exists: check against the
    // whole space at cap 1.
    auto space = enumerate_monofns(1);
    for (const auto& f : space)
        for (const auto& g : space) {
            auto h = mono_lub(f, g);
            if (!h) continue;
            CHECK(mono_leq(f, *h));
            CHECK(mono_leq(g, *h));
            for (const auto& u : space)
                if (mono_leq(f, u) && mono_leq(g, u)) CHECK(mono_leq(*h, u));
        }
}

TEST_CASE("strictify yields the largest strict minorant", "[flat]") {
    // Frozen example: the constant-3 function loses only its bot value.
    MonoFn c3 = MonoFn::constant(3, 3);
    MonoFn s = strictify_mono(c3);
    CHECK(s.at_bot() == NatBot::bot());
    for (NatBot v : s.table()) CHECK(v == NatBot::of(3));

    // Oracle: brute force over all strict minorants at caps 0..2.
    for (int k = 0; k <= 2; ++k)
        for (const auto& f : enumerate_monofns(k)) {
            MonoFn best = strictify_mono(f);
            CHECK(best.is_strict());
            CHECK(mono_leq(best, f));
            for (const auto& g : enumerate_monofns(k))
                if (g.is_strict() && mono_leq(g, f)) CHECK(mono_leq(g, best));
        }
}

TEST_CASE("projection truncates values and embedding is a section", "[flat]") {
    // Frozen example: table (1,2,0) at cap 2 projects to (1,bot) at cap 1.
    MonoFn f = MonoFn::strict(2, {NatBot::of(1), NatBot::of(2), NatBot::of(0)});
    MonoFn p = project_monofn(f, 1);
    CHECK(p == MonoFn::strict(1, {NatBot::of(1), NatBot::bot()}));

    // Constant above the target cap collapses to bottom.
    CHECK(project_monofn(MonoFn::constant(2, 2), 1) == MonoFn::bottom(1));

    for (int k = 0; k <= 2; ++k)
        for (const auto& g : enumerate_monofns(k)) {
            CHECK(project_monofn(embed_monofn(g, k + 2), k) == g);
            CHECK(mono_leq(embed_monofn(project_monofn(g, std::max(0, k - 1)), k), g));
        }
}

TEST_CASE("tuple indexing is a bijection with position 1 most significant", "[flat]") {
    const int n = 2, k = 1;
    const std::uint64_t m = monofn_count(k);
    REQUIRE(tuple_count(n, k) == m * m);
    for (std::uint64_t idx = 0; idx < tuple_count(n, k); ++idx) {
        ArgTuple v = tuple_at(n, k, idx);
        CHECK(tuple_index(v) == idx);
        CHECK(monofn_index(v.at(1)) == idx / m);
        CHECK(monofn_index(v.at(2)) == idx % m);
    }
}

TEST_CASE("strictify_args hits exactly the selected positions", "[flat]") {
    ArgTuple v({MonoFn::constant(1, 1), MonoFn::constant(1, 0)});
    ArgTuple w = strictify_args(v, StrictSet::of({2}));
    CHECK(w.at(1) == MonoFn::constant(1, 1));
    CHECK(w.at(2) == strictify_mono(MonoFn::constant(1, 0)));
    CHECK(tuple_leq(w, v));
}

TEST_CASE("strict sets parse and print", "[flat]") {
    CHECK(StrictSet::parse("{1,3}").to_string() == "{1,3}");
    CHECK(StrictSet::parse("2,1") == StrictSet::of({1, 2}));
    CHECK(StrictSet::parse("").size() == 0);
    CHECK(StrictSet::parse("{}") == StrictSet::empty());
    CHECK(StrictSet::full(3).to_string() == "{1,2,3}");
    CHECK(StrictSet::of({1}).subset_of(StrictSet::of({1, 2})));
    CHECK_FALSE(StrictSet::of({3}).subset_of(StrictSet::of({1, 2})));
    CHECK_THROWS_AS(StrictSet::parse("{0}"), std::invalid_argument);
    CHECK(all_strict_sets(2).size() == 4);
}

TEST_CASE("function text form round-trips", "[flat]") {
    for (int k = 0; k <= 2; ++k)
        for (const auto& f : enumerate_monofns(k))
            CHECK(parse_monofn(to_string(f)) == f);

    // The cap hint widens sparse input; unlisted points take the bot value.
    MonoFn g = parse_monofn("fn(bot=bot; 0=1)", 3);
    CHECK(g.cap() == 3);
    CHECK(g.apply(NatBot::of(0)) == NatBot::of(1));
    CHECK(g.apply(NatBot::of(3)) == NatBot::bot());
    CHECK(parse_monofn("fn(bot=2;)").cap() == 2);
    CHECK_THROWS_AS(parse_monofn("fn(bot=0; 0=1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_monofn("fn(0=1)"), std::invalid_argument);
}
