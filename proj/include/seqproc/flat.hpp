#pragma once

// Flat truncated domain {bot, 0, ..., k} and the monotone unary functions
// on it.  Everything here is an immutable value type; all operations are
// pure.  A cap k fixes the finite slice of the naturals we work in: a
// function at cap k maps {bot,0..k} into {bot,0..k}.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqproc {

// ---------------------------------------------------------------------------
// NatBot: a natural number or bot.  bot is below every number; two numbers
// are comparable only when equal.

class NatBot {
public:
    constexpr NatBot() = default;  // bot
    static constexpr NatBot bot() { return NatBot(); }
    static constexpr NatBot of(int n) {
        NatBot v;
        v.v_ = n >= 0 ? n : -1;
        return v;
    }

    constexpr bool is_bot() const { return v_ < 0; }
    constexpr bool is_num() const { return v_ >= 0; }
    // Numeric value; only meaningful when is_num().
    constexpr int num() const { return v_; }
    // Encoding used for ordering/keys: bot = -1, numbers as themselves.
    constexpr int code() const { return v_; }

    friend constexpr bool operator==(NatBot a, NatBot b) { return a.v_ == b.v_; }
    friend constexpr bool operator!=(NatBot a, NatBot b) { return a.v_ != b.v_; }

private:
    int v_ = -1;
};

inline constexpr bool flat_leq(NatBot a, NatBot b) {
    return a.is_bot() || a == b;
}

// Least upper bound in the flat order, if the two elements are consistent.
inline std::optional<NatBot> flat_lub(NatBot a, NatBot b) {
    if (a.is_bot()) return b;
    if (b.is_bot() || a == b) return a;
    return std::nullopt;
}

inline NatBot flat_project(NatBot a, int k) {
    return (a.is_num() && a.num() <= k) ? a : NatBot::bot();
}

inline std::string to_string(NatBot a) {
    return a.is_bot() ? "bot" : std::to_string(a.num());
}

// ---------------------------------------------------------------------------
// StrictSet: a subset of argument positions {1..n}, kept as a bitmask.
// Position i is stored in bit (i-1).

class StrictSet {
public:
    constexpr StrictSet() = default;
    static constexpr StrictSet empty() { return StrictSet(); }
    static StrictSet full(int n) { return StrictSet((1u << n) - 1u); }
    static StrictSet of(std::initializer_list<int> xs) {
        StrictSet s;
        for (int i : xs) s = s.with(i);
        return s;
    }
    static StrictSet from_mask(std::uint32_t bits) { return StrictSet(bits); }

    bool contains(int i) const { return i >= 1 && (bits_ >> (i - 1)) & 1u; }
    StrictSet with(int i) const {
        if (i < 1 || i > 32) throw std::invalid_argument("StrictSet: position out of range");
        return StrictSet(bits_ | (1u << (i - 1)));
    }
    int size() const { return __builtin_popcount(bits_); }
    std::uint32_t mask() const { return bits_; }
    bool subset_of(const StrictSet& o) const { return (bits_ & ~o.bits_) == 0; }

    friend bool operator==(StrictSet a, StrictSet b) { return a.bits_ == b.bits_; }
    friend bool operator!=(StrictSet a, StrictSet b) { return a.bits_ != b.bits_; }

    // "{1,3}"; "{}" for the empty set.
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i = 1; i <= 32; ++i)
            if (contains(i)) {
                if (!first) s += ',';
                s += std::to_string(i);
                first = false;
            }
        return s + "}";
    }

    // Accepts "1,2", "{1,2}", "" (empty set).
    static StrictSet parse(const std::string& text) {
        StrictSet s;
        std::string body = text;
        if (!body.empty() && body.front() == '{') {
            if (body.back() != '}') throw std::invalid_argument("StrictSet: unbalanced braces");
            body = body.substr(1, body.size() - 2);
        }
        std::istringstream in(body);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            size_t pos = 0;
            int i = std::stoi(tok, &pos);
            if (pos != tok.size() || i < 1)
                throw std::invalid_argument("StrictSet: bad position '" + tok + "'");
            s = s.with(i);
        }
        return s;
    }

private:
    explicit constexpr StrictSet(std::uint32_t b) : bits_(b) {}
    std::uint32_t bits_ = 0;
};

inline std::vector<StrictSet> all_strict_sets(int n) {
    std::vector<StrictSet> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) out.push_back(StrictSet::from_mask(m));
    return out;
}

// ---------------------------------------------------------------------------
// MonoFn: a monotone function {bot,0..k} -> {bot,0..k}.  Monotonicity over
// the flat order collapses to one constraint: if the value at bot is a
// number c, the function is constant c.  Applying the function above its
// cap answers the value at bot; this is exactly what the canonical
// embedding into a larger cap would do, so apply() is cap-agnostic.

class MonoFn {
public:
    MonoFn(int cap, NatBot at_bot, std::vector<NatBot> table)
        : cap_(cap), at_bot_(at_bot), table_(std::move(table)) {
        if (cap_ < 0) throw std::invalid_argument("MonoFn: negative cap");
        if (table_.size() != static_cast<size_t>(cap_) + 1)
            throw std::invalid_argument("MonoFn: table size must be cap+1");
        auto in_range = [&](NatBot v) { return v.is_bot() || v.num() <= cap_; };
        if (!in_range(at_bot_)) throw std::invalid_argument("MonoFn: value above cap");
        for (NatBot v : table_) {
            if (!in_range(v)) throw std::invalid_argument("MonoFn: value above cap");
            if (at_bot_.is_num() && v != at_bot_)
                throw std::invalid_argument("MonoFn: defined at bot but not constant");
        }
    }

    static MonoFn constant(int cap, int c) {
        return MonoFn(cap, NatBot::of(c), std::vector<NatBot>(cap + 1, NatBot::of(c)));
    }
    static MonoFn bottom(int cap) {
        return MonoFn(cap, NatBot::bot(), std::vector<NatBot>(cap + 1, NatBot::bot()));
    }
    // Strict function from a table over {0..cap}.
    static MonoFn strict(int cap, std::vector<NatBot> table) {
        return MonoFn(cap, NatBot::bot(), std::move(table));
    }

    int cap() const { return cap_; }
    NatBot at_bot() const { return at_bot_; }
    const std::vector<NatBot>& table() const { return table_; }
    bool is_strict() const { return at_bot_.is_bot(); }

    NatBot apply(NatBot x) const {
        if (x.is_bot() || x.num() > cap_) return at_bot_;
        return table_[x.num()];
    }

    friend bool operator==(const MonoFn& a, const MonoFn& b) {
        return a.cap_ == b.cap_ && a.at_bot_ == b.at_bot_ && a.table_ == b.table_;
    }
    friend bool operator!=(const MonoFn& a, const MonoFn& b) { return !(a == b); }

private:
    int cap_;
    NatBot at_bot_;
    std::vector<NatBot> table_;
};

inline bool mono_leq(const MonoFn& f, const MonoFn& g) {
    if (f.cap() != g.cap()) throw std::invalid_argument("mono_leq: cap mismatch");
    if (!flat_leq(f.at_bot(), g.at_bot())) return false;
    for (int x = 0; x <= f.cap(); ++x)
        if (!flat_leq(f.table()[x], g.table()[x])) return false;
    return true;
}

// Pointwise lub; nullopt if some point carries two distinct numbers.
// (A flatness violation cannot arise: a numeric lub at bot forces one side
// to be constant, and any disagreeing entry then conflicts pointwise.)
inline std::optional<MonoFn> mono_lub(const MonoFn& f, const MonoFn& g) {
    if (f.cap() != g.cap()) throw std::invalid_argument("mono_lub: cap mismatch");
    auto ab = flat_lub(f.at_bot(), g.at_bot());
    if (!ab) return std::nullopt;
    std::vector<NatBot> t(f.cap() + 1);
    for (int x = 0; x <= f.cap(); ++x) {
        auto v = flat_lub(f.table()[x], g.table()[x]);
        if (!v) return std::nullopt;
        t[x] = *v;
    }
    return MonoFn(f.cap(), *ab, std::move(t));
}

// Largest minorant of f that is strict (bot at bot).  Numeric entries are
// untouched, so this is pointwise maximal among strict functions below f.
inline MonoFn strictify_mono(const MonoFn& f) {
    return MonoFn(f.cap(), NatBot::bot(), f.table());
}

// Restriction to cap k <= cap(f): values above k collapse to bot.  A
// constant-c function with c > k collapses to the bottom function.
inline MonoFn project_monofn(const MonoFn& f, int k) {
    if (k < 0 || k > f.cap()) throw std::invalid_argument("project_monofn: bad target cap");
    std::vector<NatBot> t(k + 1);
    for (int x = 0; x <= k; ++x) t[x] = flat_project(f.table()[x], k);
    return MonoFn(k, flat_project(f.at_bot(), k), std::move(t));
}

// Extension to cap k2 >= cap(f): above the old cap the function answers its
// value at bot, matching apply().
inline MonoFn embed_monofn(const MonoFn& f, int k2) {
    if (k2 < f.cap()) throw std::invalid_argument("embed_monofn: target cap below cap");
    std::vector<NatBot> t(k2 + 1, f.at_bot());
    for (int x = 0; x <= f.cap(); ++x) t[x] = f.table()[x];
    return MonoFn(k2, f.at_bot(), std::move(t));
}

// ---------------------------------------------------------------------------
// Canonical enumeration of all monotone functions at cap k: the k+1
// constants in ascending order, then the (k+2)^(k+1) strict functions in
// lexicographic table order (bot < 0 < ... < k, position 0 most
// significant).  Counts: 3, 11, 67 at caps 0, 1, 2.

inline std::uint64_t monofn_count(int k) {
    std::uint64_t strict = 1;
    for (int i = 0; i <= k; ++i) strict *= static_cast<std::uint64_t>(k) + 2;
    return strict + static_cast<std::uint64_t>(k) + 1;
}

inline MonoFn monofn_at(int k, std::uint64_t idx) {
    if (idx < static_cast<std::uint64_t>(k) + 1) return MonoFn::constant(k, static_cast<int>(idx));
    std::uint64_t j = idx - (k + 1);
    std::vector<NatBot> t(k + 1);
    const std::uint64_t base = static_cast<std::uint64_t>(k) + 2;
    for (int pos = k; pos >= 0; --pos) {
        int digit = static_cast<int>(j % base);  // 0 encodes bot
        t[pos] = digit == 0 ? NatBot::bot() : NatBot::of(digit - 1);
        j /= base;
    }
    if (j != 0) throw std::invalid_argument("monofn_at: index out of range");
    return MonoFn::strict(k, std::move(t));
}

inline std::uint64_t monofn_index(const MonoFn& f) {
    const int k = f.cap();
    if (!f.is_strict()) return static_cast<std::uint64_t>(f.at_bot().num());
    std::uint64_t j = 0;
    const std::uint64_t base = static_cast<std::uint64_t>(k) + 2;
    for (int pos = 0; pos <= k; ++pos) {
        NatBot v = f.table()[pos];
        j = j * base + (v.is_bot() ? 0 : static_cast<std::uint64_t>(v.num()) + 1);
    }
    return j + k + 1;
}

inline std::vector<MonoFn> enumerate_monofns(int k) {
    std::vector<MonoFn> out;
    const std::uint64_t n = monofn_count(k);
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(monofn_at(k, i));
    return out;
}

// Shared, lazily built copy of the enumeration for a cap.  Caps beyond 6
// are rejected: the space explodes and nothing downstream wants them.
inline const std::vector<MonoFn>& monofn_space(int k) {
    if (k < 0 || k > 6) throw std::invalid_argument("monofn_space: cap out of supported range");
    static std::vector<MonoFn> spaces[7];
    if (spaces[k].empty()) spaces[k] = enumerate_monofns(k);
    return spaces[k];
}

// ---------------------------------------------------------------------------
// ArgTuple: n monotone functions at a common cap; the argument vector of a
// functional.  Tuples at cap k are enumerated canonically by mixed-radix
// index over the per-position function indices, position 1 most
// significant.

class ArgTuple {
public:
    ArgTuple(std::vector<MonoFn> fns) : fns_(std::move(fns)) {
        if (fns_.empty()) throw std::invalid_argument("ArgTuple: empty tuple");
        for (const MonoFn& f : fns_)
            if (f.cap() != fns_.front().cap())
                throw std::invalid_argument("ArgTuple: mixed caps");
    }

    int arity() const { return static_cast<int>(fns_.size()); }
    int cap() const { return fns_.front().cap(); }
    // 1-based access, matching variable numbering x1, x2, ...
    const MonoFn& at(int i) const {
        if (i < 1 || i > arity()) throw std::invalid_argument("ArgTuple: index out of range");
        return fns_[i - 1];
    }

    friend bool operator==(const ArgTuple& a, const ArgTuple& b) { return a.fns_ == b.fns_; }

private:
    std::vector<MonoFn> fns_;
};

inline std::uint64_t tuple_count(int n, int k) {
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c *= monofn_count(k);
    return c;
}

inline ArgTuple tuple_at(int n, int k, std::uint64_t idx) {
    const std::uint64_t m = monofn_count(k);
    std::vector<MonoFn> fns;
    fns.reserve(n);
    std::vector<std::uint64_t> digits(n);
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = idx % m;
        idx /= m;
    }
    if (idx != 0) throw std::invalid_argument("tuple_at: index out of range");
    const std::vector<MonoFn>& space = monofn_space(k);
    for (int i = 0; i < n; ++i) fns.push_back(space[digits[i]]);
    return ArgTuple(std::move(fns));
}

inline std::uint64_t tuple_index(const ArgTuple& v) {
    const std::uint64_t m = monofn_count(v.cap());
    std::uint64_t idx = 0;
    for (int i = 1; i <= v.arity(); ++i) idx = idx * m + monofn_index(v.at(i));
    return idx;
}

// Replace each position in S by its largest strict minorant.  This is the
// pointwise-largest tuple below v that is strict on S, and the witness for
// strictified application everywhere in the library.
inline ArgTuple strictify_args(const ArgTuple& v, StrictSet s) {
    std::vector<MonoFn> fns;
    fns.reserve(v.arity());
    for (int i = 1; i <= v.arity(); ++i)
        fns.push_back(s.contains(i) ? strictify_mono(v.at(i)) : v.at(i));
    return ArgTuple(std::move(fns));
}

inline ArgTuple project_tuple(const ArgTuple& v, int k) {
    std::vector<MonoFn> fns;
    fns.reserve(v.arity());
    for (int i = 1; i <= v.arity(); ++i) fns.push_back(project_monofn(v.at(i), k));
    return ArgTuple(std::move(fns));
}

inline ArgTuple embed_tuple(const ArgTuple& v, int k2) {
    std::vector<MonoFn> fns;
    fns.reserve(v.arity());
    for (int i = 1; i <= v.arity(); ++i) fns.push_back(embed_monofn(v.at(i), k2));
    return ArgTuple(std::move(fns));
}

inline bool tuple_leq(const ArgTuple& a, const ArgTuple& b) {
    if (a.arity() != b.arity()) throw std::invalid_argument("tuple_leq: arity mismatch");
    for (int i = 1; i <= a.arity(); ++i)
        if (!mono_leq(a.at(i), b.at(i))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Textual form: fn(bot=V; 0=V,1=V,...) with V a number or 'bot'.  Printing
// lists argument positions in ascending order.

inline std::string to_string(const MonoFn& f) {
    std::string s = "fn(bot=" + to_string(f.at_bot()) + "; ";
    for (int x = 0; x <= f.cap(); ++x) {
        if (x) s += ',';
        s += std::to_string(x) + "=" + to_string(f.table()[x]);
    }
    return s + ")";
}

namespace detail {

inline void skip_ws(const std::string& s, size_t& p) {
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
}

inline NatBot parse_natbot_at(const std::string& s, size_t& p) {
    skip_ws(s, p);
    if (s.compare(p, 3, "bot") == 0) {
        p += 3;
        return NatBot::bot();
    }
    size_t q = p;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
    if (q == p) throw std::invalid_argument("MonoFn parse: expected number or 'bot'");
    int v = std::stoi(s.substr(p, q - p));
    p = q;
    return NatBot::of(v);
}

inline void expect_char(const std::string& s, size_t& p, char c) {
    skip_ws(s, p);
    if (p >= s.size() || s[p] != c)
        throw std::invalid_argument(std::string("MonoFn parse: expected '") + c + "'");
    ++p;
}

// Parses the parenthesised body "(bot=V; 0=V,...)" starting at p.  The cap
// is the largest number mentioned anywhere, widened to cap_hint if larger.
inline MonoFn parse_monofn_body(const std::string& s, size_t& p, int cap_hint) {
    expect_char(s, p, '(');
    skip_ws(s, p);
    if (s.compare(p, 3, "bot") != 0)
        throw std::invalid_argument("MonoFn parse: expected 'bot='");
    p += 3;
    expect_char(s, p, '=');
    NatBot at_bot = parse_natbot_at(s, p);
    expect_char(s, p, ';');
    std::vector<std::pair<int, NatBot>> entries;
    int max_mentioned = -1;
    skip_ws(s, p);
    if (p < s.size() && s[p] != ')') {
        for (;;) {
            NatBot pos = parse_natbot_at(s, p);
            if (pos.is_bot()) throw std::invalid_argument("MonoFn parse: 'bot' is not a position");
            expect_char(s, p, '=');
            NatBot val = parse_natbot_at(s, p);
            entries.emplace_back(pos.num(), val);
            if (pos.num() > max_mentioned) max_mentioned = pos.num();
            if (val.is_num() && val.num() > max_mentioned) max_mentioned = val.num();
            skip_ws(s, p);
            if (p < s.size() && s[p] == ',') {
                ++p;
                continue;
            }
            break;
        }
    }
    expect_char(s, p, ')');
    if (at_bot.is_num() && at_bot.num() > max_mentioned) max_mentioned = at_bot.num();
    int cap = std::max(max_mentioned, cap_hint);
    if (cap < 0) cap = 0;
    // Unlisted positions default to the value at bot, so a bare
    // "fn(bot=3;)" is the constant-3 function.
    std::vector<NatBot> table(cap + 1, at_bot);
    for (auto& [pos, val] : entries) {
        if (pos > cap) throw std::invalid_argument("MonoFn parse: position above cap");
        table[pos] = val;
    }
    return MonoFn(cap, at_bot, std::move(table));
}

}  // namespace detail

// Parses "fn(bot=V; 0=V,...)".  cap_hint widens the cap when the text
// mentions fewer positions than the context requires.
inline MonoFn parse_monofn(const std::string& text, int cap_hint = -1) {
    size_t p = 0;
    detail::skip_ws(text, p);
    if (text.compare(p, 2, "fn") != 0)
        throw std::invalid_argument("MonoFn parse: expected 'fn('");
    p += 2;
    MonoFn f = detail::parse_monofn_body(text, p, cap_hint);
    detail::skip_ws(text, p);
    if (p != text.size()) throw std::invalid_argument("MonoFn parse: trailing input");
    return f;
}

}  // namespace seqproc
