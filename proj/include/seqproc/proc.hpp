#pragma once

// Procedure terms: finite decision trees over oracle arguments x1..xn.
// A term is either a constant (a number or bot) or a case split
//
//     case xi(Q){a0 => P0; a1 => P1; ...}
//
// which queries oracle xi at the value computed by Q and continues in the
// branch labelled with the answer.  Branches are partial: a missing label
// means the computation dies there.  An explicit "a => bot" branch is
// distinct syntax for the same behaviour; canonicalize() erases the
// difference.  Terms are immutable and shared via ProcPtr.

#include <seqproc/flat.hpp>
#include <seqproc/rng.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace seqproc {

class Proc;
using ProcPtr = std::shared_ptr<const Proc>;
using BranchList = std::vector<std::pair<int, ProcPtr>>;

class Proc {
public:
    enum class Kind { Const, Case };

    static ProcPtr constant(NatBot v) { return std::make_shared<Proc>(Token{}, v); }
    static ProcPtr constant(int c) { return constant(NatBot::of(c)); }
    static ProcPtr bottom() { return constant(NatBot::bot()); }

    // Branches may arrive in any order; they are stored sorted by label.
    static ProcPtr make_case(int var, ProcPtr query, BranchList branches) {
        if (var < 1) throw std::invalid_argument("Proc: variable index must be >= 1");
        if (!query) throw std::invalid_argument("Proc: null query");
        std::sort(branches.begin(), branches.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 0; i < branches.size(); ++i) {
            if (branches[i].first < 0 || !branches[i].second)
                throw std::invalid_argument("Proc: bad branch");
            if (i && branches[i].first == branches[i - 1].first)
                throw std::invalid_argument("Proc: duplicate branch label");
        }
        return std::make_shared<Proc>(Token{}, var, std::move(query), std::move(branches));
    }

    Kind kind() const { return kind_; }
    bool is_const() const { return kind_ == Kind::Const; }
    bool is_case() const { return kind_ == Kind::Case; }

    NatBot value() const { return value_; }                    // Const only
    int var() const { return var_; }                           // Case only
    const ProcPtr& query() const { return query_; }            // Case only
    const BranchList& branches() const { return branches_; }   // Case only

    // Branch body for a label, or nullptr when the branch is absent.
    const ProcPtr* branch(int label) const {
        auto it = std::lower_bound(
            branches_.begin(), branches_.end(), label,
            [](const auto& br, int l) { return br.first < l; });
        if (it == branches_.end() || it->first != label) return nullptr;
        return &it->second;
    }

    // Constructors are only reachable through the factories above.
    struct Token {};
    Proc(Token, NatBot v) : kind_(Kind::Const), value_(v) {}
    Proc(Token, int var, ProcPtr query, BranchList branches)
        : kind_(Kind::Case), var_(var), query_(std::move(query)),
          branches_(std::move(branches)) {}

private:
    Kind kind_;
    NatBot value_{};
    int var_ = 0;
    ProcPtr query_;
    BranchList branches_;
};

inline bool proc_equal(const ProcPtr& a, const ProcPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind()) return false;
    if (a->is_const()) return a->value() == b->value();
    if (a->var() != b->var()) return false;
    if (a->branches().size() != b->branches().size()) return false;
    if (!proc_equal(a->query(), b->query())) return false;
    for (size_t i = 0; i < a->branches().size(); ++i) {
        if (a->branches()[i].first != b->branches()[i].first) return false;
        if (!proc_equal(a->branches()[i].second, b->branches()[i].second)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Structural measurements.

inline int case_count(const ProcPtr& p) {
    if (p->is_const()) return 0;
    int n = 1 + case_count(p->query());
    for (const auto& [label, body] : p->branches()) n += case_count(body);
    return n;
}

inline int max_var(const ProcPtr& p) {
    if (p->is_const()) return 0;
    int m = std::max(p->var(), max_var(p->query()));
    for (const auto& [label, body] : p->branches()) m = std::max(m, max_var(body));
    return m;
}

// Largest number written anywhere in the term (constants and branch
// labels); -1 when the term mentions none.
inline int max_numeral(const ProcPtr& p) {
    if (p->is_const()) return p->value().is_num() ? p->value().num() : -1;
    int m = max_numeral(p->query());
    for (const auto& [label, body] : p->branches())
        m = std::max({m, label, max_numeral(body)});
    return m;
}

inline void collect_subterms(const ProcPtr& p, std::vector<ProcPtr>& out) {
    out.push_back(p);
    if (p->is_case()) {
        collect_subterms(p->query(), out);
        for (const auto& [label, body] : p->branches()) collect_subterms(body, out);
    }
}

// ---------------------------------------------------------------------------
// Printing.  pretty() is exact: parse(pretty(p)) reproduces p including
// explicit bot branches, so the string doubles as a structural key.

inline std::string pretty(const ProcPtr& p) {
    if (p->is_const()) return to_string(p->value());
    std::string s = "case x" + std::to_string(p->var()) + "(" + pretty(p->query()) + "){";
    bool first = true;
    for (const auto& [label, body] : p->branches()) {
        if (!first) s += "; ";
        s += std::to_string(label) + " => " + pretty(body);
        first = false;
    }
    return s + "}";
}

// Erase explicit bot-valued branches, which behave identically to absent
// ones.  Queries are left alone: a case with a dead query still queries.
inline ProcPtr canonicalize(const ProcPtr& p) {
    if (p->is_const()) return p;
    BranchList kept;
    for (const auto& [label, body] : p->branches()) {
        ProcPtr c = canonicalize(body);
        if (c->is_const() && c->value().is_bot()) continue;
        kept.emplace_back(label, std::move(c));
    }
    return Proc::make_case(p->var(), canonicalize(p->query()), std::move(kept));
}

// ---------------------------------------------------------------------------
// Parsing.  Grammar (whitespace-insensitive, '#' starts a line comment):
//
//     proc     := 'bot' | NUMBER | 'case' 'x' NUMBER '(' proc ')' '{' [branches] '}'
//     branches := NUMBER '=>' proc (';' NUMBER '=>' proc)* [';']

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

namespace detail {

class ProcParser {
public:
    explicit ProcParser(std::string text) : text_(std::move(text)) {}

    ProcPtr parse_all() {
        ProcPtr p = parse_proc();
        skip();
        if (pos_ != text_.size()) fail("trailing input");
        return p;
    }

    ProcPtr parse_proc() {
        skip();
        if (eat_word("bot")) return Proc::bottom();
        if (eat_word("case")) return parse_case();
        if (std::isdigit(peek())) return Proc::constant(parse_number());
        fail("expected 'bot', a number, or 'case'");
    }

private:
    ProcPtr parse_case() {
        skip();
        if (!eat_char('x')) fail("expected variable 'x<i>'");
        if (!std::isdigit(peek())) fail("expected variable index");
        int var = parse_number();
        if (var < 1) fail("variable index must be >= 1");
        expect('(');
        ProcPtr query = parse_proc();
        expect(')');
        expect('{');
        BranchList branches;
        skip();
        while (peek() != '}') {
            if (!std::isdigit(peek())) fail("expected branch label");
            int label = parse_number();
            expect('=');
            if (!eat_char('>')) fail("expected '=>'");
            branches.emplace_back(label, parse_proc());
            skip();
            if (peek() == ';') {
                ++pos_;
                skip();
            } else if (peek() != '}') {
                fail("expected ';' or '}'");
            }
        }
        ++pos_;  // consume '}'
        size_t at = pos_;
        for (size_t i = 0; i + 1 < branches.size(); ++i)
            for (size_t j = i + 1; j < branches.size(); ++j)
                if (branches[i].first == branches[j].first) {
                    pos_ = at;
                    fail("duplicate branch label " + std::to_string(branches[i].first));
                }
        return Proc::make_case(var, std::move(query), std::move(branches));
    }

    int parse_number() {
        skip();
        size_t q = pos_;
        while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
        if (q == pos_) fail("expected a number");
        if (q - pos_ > 9) fail("number too large");
        int v = std::stoi(text_.substr(pos_, q - pos_));
        pos_ = q;
        return v;
    }

    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat_char(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat_char(c)) fail(std::string("expected '") + c + "'");
    }

    // Matches a keyword not followed by an identifier character.
    bool eat_word(const std::string& w) {
        skip();
        if (text_.compare(pos_, w.size(), w) != 0) return false;
        size_t end = pos_ + w.size();
        if (end < text_.size() &&
            (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    std::string text_;
    size_t pos_ = 0;
};

}  // namespace detail

inline ProcPtr parse_proc(const std::string& text) {
    return detail::ProcParser(text).parse_all();
}

// ---------------------------------------------------------------------------
// Source files: a header "n=N" (optionally ", k=K"), a ';' or newline, then
// one term.  '#' comments are allowed anywhere.

struct ProcSource {
    int arity = 0;
    std::optional<int> cap;
    ProcPtr proc;
};

inline int parse_header_number(const std::string& s, size_t& p) {
    NatBot v = detail::parse_natbot_at(s, p);
    if (v.is_bot()) throw ParseError("expected a number", 1, static_cast<int>(p) + 1);
    return v.num();
}

inline ProcSource parse_proc_source(const std::string& text) {
    // Drop comments first so a leading comment line cannot shadow the
    // header; newlines are kept to preserve error positions.
    std::string clean = text;
    for (size_t i = 0; i < clean.size(); ++i)
        if (clean[i] == '#')
            while (i < clean.size() && clean[i] != '\n') clean[i++] = ' ';
    size_t start = clean.find_first_not_of(" \t\r\n");
    if (start == std::string::npos)
        throw ParseError("empty input; expected 'n=N;' header", 1, 1);
    size_t split = clean.find_first_of(";\n", start);
    if (split == std::string::npos)
        throw ParseError("expected 'n=N;' header before the term", 1, 1);
    std::string header = clean.substr(start, split - start);
    ProcSource out;
    bool saw_n = false;
    size_t p = 0;
    while (p < header.size()) {
        detail::skip_ws(header, p);
        if (p >= header.size()) break;
        if (header.compare(p, 2, "n=") == 0) {
            p += 2;
            out.arity = parse_header_number(header, p);
            saw_n = true;
        } else if (header.compare(p, 2, "k=") == 0) {
            p += 2;
            out.cap = parse_header_number(header, p);
        } else if (header[p] == ',') {
            ++p;
        } else {
            throw ParseError("bad header; expected n=N[, k=K]", 1, static_cast<int>(p) + 1);
        }
    }
    if (!saw_n || out.arity < 1)
        throw ParseError("header must set n >= 1", 1, 1);
    if (out.cap && *out.cap < 0) throw ParseError("k must be >= 0", 1, 1);
    out.proc = parse_proc(clean.substr(split + 1));
    if (max_var(out.proc) > out.arity)
        throw ParseError("term uses x" + std::to_string(max_var(out.proc)) +
                             " but n=" + std::to_string(out.arity),
                         1, 1);
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive generation by exact case-node count.  Sizes below the one
// being produced are memoized; the top size streams through a callback so
// large fronts never sit in memory at once.

class ProcEnumerator {
public:
    ProcEnumerator(int arity, int cap) : n_(arity), k_(cap) {
        if (arity < 1 || cap < 0) throw std::invalid_argument("ProcEnumerator: bad parameters");
    }

    int arity() const { return n_; }
    int cap() const { return k_; }

    // Number of terms with exactly `size` case nodes.
    std::uint64_t count_exact(int size) {
        if (size < 0) return 0;
        if (size == 0) return static_cast<std::uint64_t>(k_) + 2;
        std::uint64_t total = 0;
        for (int sq = 0; sq < size; ++sq)
            total += static_cast<std::uint64_t>(n_) * count_exact(sq) *
                     branch_count(0, size - 1 - sq);
        return total;
    }

    std::uint64_t count_upto(int max_size) {
        std::uint64_t total = 0;
        for (int s = 0; s <= max_size; ++s) total += count_exact(s);
        return total;
    }

    // All terms with exactly `size` case nodes, in a fixed deterministic
    // order (constants bot,0..k first at size 0; then by variable, query
    // size, query, branch assignment).
    const std::vector<ProcPtr>& exact(int size) {
        while (static_cast<int>(memo_.size()) <= size) {
            std::vector<ProcPtr> level;
            stream_exact(static_cast<int>(memo_.size()),
                         [&](const ProcPtr& p) { level.push_back(p); });
            memo_.push_back(std::move(level));
        }
        return memo_[size];
    }

    // Visit every term with at most `max_size` case nodes.  Only sizes
    // strictly below the current one are materialized.
    void for_each(int max_size, const std::function<void(const ProcPtr&)>& fn) {
        for (int s = 0; s <= max_size; ++s) stream_exact(s, fn);
    }

private:
    void stream_exact(int size, const std::function<void(const ProcPtr&)>& fn) {
        if (size == 0) {
            fn(Proc::bottom());
            for (int c = 0; c <= k_; ++c) fn(Proc::constant(c));
            return;
        }
        BranchList partial;
        for (int var = 1; var <= n_; ++var)
            for (int sq = 0; sq < size; ++sq)
                for (const ProcPtr& q : exact(sq))
                    emit_branches(0, size - 1 - sq, partial, [&](const BranchList& brs) {
                        fn(Proc::make_case(var, q, BranchList(brs)));
                    });
    }

    // Distribute `remaining` case nodes over the bodies of labels
    // `label..k`; each label is either absent or present with a body.
    void emit_branches(int label, int remaining, BranchList& partial,
                       const std::function<void(const BranchList&)>& yield) {
        if (label > k_) {
            if (remaining == 0) yield(partial);
            return;
        }
        emit_branches(label + 1, remaining, partial, yield);  // absent
        for (int t = 0; t <= remaining; ++t)
            for (const ProcPtr& body : exact(t)) {
                partial.emplace_back(label, body);
                emit_branches(label + 1, remaining - t, partial, yield);
                partial.pop_back();
            }
    }

    std::uint64_t branch_count(int label, int remaining) {
        if (label > k_) return remaining == 0 ? 1 : 0;
        auto key = std::make_pair(label, remaining);
        auto it = branch_memo_.find(key);
        if (it != branch_memo_.end()) return it->second;
        std::uint64_t total = branch_count(label + 1, remaining);
        for (int t = 0; t <= remaining; ++t)
            total += count_exact(t) * branch_count(label + 1, remaining - t);
        branch_memo_[key] = total;
        return total;
    }

    int n_, k_;
    std::vector<std::vector<ProcPtr>> memo_;
    std::map<std::pair<int, int>, std::uint64_t> branch_memo_;
};

// Depth-bounded random term for property tests.  Deterministic for a
// given generator state.
inline ProcPtr random_proc(Rng& rng, int arity, int cap, int depth) {
    if (depth <= 0 || rng_below(rng, 3) == 0) {
        std::uint64_t c = rng_below(rng, static_cast<std::uint64_t>(cap) + 2);
        return c == 0 ? Proc::bottom() : Proc::constant(static_cast<int>(c - 1));
    }
    int var = 1 + static_cast<int>(rng_below(rng, arity));
    ProcPtr query = random_proc(rng, arity, cap, depth - 1);
    BranchList branches;
    for (int a = 0; a <= cap; ++a)
        if (rng_coin(rng)) branches.emplace_back(a, random_proc(rng, arity, cap, depth - 1));
    return Proc::make_case(var, std::move(query), std::move(branches));
}

}  // namespace seqproc
