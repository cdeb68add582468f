#pragma once

// Paths: finite records of oracle interactions.  An item says "position i,
// asked at this query, answered b".  For a strict position the query is a
// bare numeral; for the others it is a whole functional of the argument
// tuple, kept strictified on the positions at or inside it so that its
// value never depends on information a strict oracle cannot give.
//
// A tuple matches a path when it reproduces every recorded answer.  Terms
// in normal form can be run directly against a path: each case resolves
// its answer by looking its query up among the items -- numerals by
// equality, functionals by graph equality -- so a run either reaches a
// constant or halts at the first query the path does not answer.

#include <seqproc/graph.hpp>
#include <seqproc/normal.hpp>

#include <string>
#include <variant>
#include <vector>

namespace seqproc {

struct SQuery {
    int var = 0;
    std::variant<int, FunGraph> payload;  // numeral or functional

    bool is_constant() const { return payload.index() == 0; }
    int constant() const { return std::get<int>(payload); }
    const FunGraph& graph() const { return std::get<FunGraph>(payload); }

    friend bool operator==(const SQuery& a, const SQuery& b) {
        return a.var == b.var && a.payload == b.payload;
    }
};

struct PathItem {
    SQuery query;
    int answer = 0;  // recorded answers are always numerals
};

struct Path {
    int arity = 0;
    int cap = 0;
    StrictSet strict;
    std::vector<PathItem> items;
};

// Value the query asks at, for a given tuple.  Tuples at a smaller cap are
// embedded first; numerals above the tuple's cap resolve through the
// oracle's value at bot, which is what the embedding would do anyway.
inline NatBot query_value(const SQuery& q, const ArgTuple& v) {
    if (q.is_constant()) return NatBot::of(q.constant());
    const FunGraph& g = q.graph();
    if (v.cap() == g.cap()) return g.apply(v);
    if (v.cap() < g.cap()) return g.apply(embed_tuple(v, g.cap()));
    throw std::invalid_argument("query_value: tuple cap above query cap");
}

inline NatBot query_answer(const SQuery& q, const ArgTuple& v) {
    return v.at(q.var).apply(query_value(q, v));
}

inline bool matches(const ArgTuple& v, const Path& path) {
    if (v.arity() != path.arity) throw std::invalid_argument("matches: arity mismatch");
    for (const PathItem& it : path.items)
        if (query_answer(it.query, v) != NatBot::of(it.answer)) return false;
    return true;
}

// Indices (into tuple_space(arity, cap)) of the tuples at `cap` matching
// the path.  cap may be below the path's own cap.
inline std::vector<std::uint32_t> matching_indices(const Path& path, int cap) {
    const auto& space = tuple_space(path.arity, cap);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < space.size(); ++i)
        if (matches(space[i], path)) out.push_back(i);
    return out;
}

// Structural validity.  Returns an explanation, or nothing when valid.
inline std::optional<std::string> path_error(const Path& path) {
    if (path.arity < 1 || path.cap < 0) return "bad shape";
    for (size_t j = 0; j < path.items.size(); ++j) {
        const PathItem& it = path.items[j];
        std::string where = "item " + std::to_string(j) + ": ";
        if (it.query.var < 1 || it.query.var > path.arity)
            return where + "position out of range";
        if (it.answer < 0) return where + "negative answer";
        if (path.strict.contains(it.query.var)) {
            if (!it.query.is_constant())
                return where + "strict position must carry a numeral query";
            if (it.query.constant() < 0) return where + "negative numeral";
        } else {
            if (it.query.is_constant())
                return where + "non-strict position must carry a functional query";
            const FunGraph& g = it.query.graph();
            if (g.arity() != path.arity || g.cap() != path.cap)
                return where + "functional shape mismatch";
        }
    }
    return std::nullopt;
}

inline bool is_path(const Path& path) { return !path_error(path).has_value(); }

// Freshly built paths carry payloads strictified at their own position.
// This is a convention, not part of structural validity: truncating a
// functional does not commute with strictifying it, so projected paths may
// not satisfy it, and they are still perfectly good paths.
inline bool payloads_strictified(const Path& path) {
    for (const PathItem& it : path.items) {
        if (it.query.is_constant()) continue;
        const FunGraph& g = it.query.graph();
        if (g != strictify_graph(g, path.strict.with(it.query.var))) return false;
    }
    return true;
}

inline bool path_consistent(const Path& path) {
    return !matching_indices(path, path.cap).empty();
}

// Truncate every functional payload to cap k.  Numerals and answers stay
// verbatim: an answer above k simply becomes unmatchable at that cap,
// which is exactly the information the truncation should keep.
inline Path project_path(const Path& path, int k) {
    Path out;
    out.arity = path.arity;
    out.cap = k;
    out.strict = path.strict;
    out.items.reserve(path.items.size());
    for (const PathItem& it : path.items) {
        if (it.query.is_constant())
            out.items.push_back(it);
        else
            out.items.push_back(
                {{it.query.var, project_fun(it.query.graph(), k)}, it.answer});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Running a normal-form term against a path.

struct PathEvalResult {
    enum class Stop {
        Value,       // reached a numeral
        BotLeaf,     // reached bot: a bot constant or an absent branch
        Unanswered,  // halted at a query the path does not answer
    };
    Stop stop = Stop::BotLeaf;
    NatBot value;
    // Set when Unanswered:
    ProcPtr halted_at;  // the query subterm
    SQuery query;       // its path form
};

inline std::string to_string(PathEvalResult::Stop s) {
    switch (s) {
        case PathEvalResult::Stop::Value: return "value";
        case PathEvalResult::Stop::BotLeaf: return "bot";
        case PathEvalResult::Stop::Unanswered: return "unanswered";
    }
    return "?";
}

// An item (i, G, b) answers a query (i, Q) when G lies below Q pointwise.
// Flatness makes the recorded b binding for every tuple the path matches:
// where G already returns a numeral Q returns the same one, and where G
// returns bot only a constant oracle can have answered b, so the larger
// query point changes nothing.
inline bool item_answers(const PathItem& it, const SQuery& q) {
    if (it.query.var != q.var) return false;
    if (it.query.is_constant() != q.is_constant()) return false;
    if (q.is_constant()) return it.query.constant() == q.constant();
    return graph_leq(it.query.graph(), q.graph());
}

// The term must be in normal form for the path's strict set: cases on
// strict positions then carry numeral queries, and every other query has a
// well-defined strictified functional.  Items are consulted first to last;
// the first one lying below the current query decides the answer.
inline PathEvalResult eval_on_path(const ProcPtr& p, const Path& path) {
    if (auto err = path_error(path)) throw std::invalid_argument("eval_on_path: " + *err);
    if (max_var(p) > path.arity)
        throw std::invalid_argument("eval_on_path: term uses missing position");
    if (!is_snormal(p, path.strict))
        throw std::invalid_argument("eval_on_path: term not in normal form for the path");

    ProcPtr cur = p;
    for (;;) {
        if (cur->is_const()) {
            PathEvalResult r;
            r.value = cur->value();
            r.stop = r.value.is_bot() ? PathEvalResult::Stop::BotLeaf
                                      : PathEvalResult::Stop::Value;
            return r;
        }
        const int i = cur->var();
        SQuery q;
        q.var = i;
        if (path.strict.contains(i)) {
            // Normal form guarantees a numeric constant query here.
            q.payload = cur->query()->value().num();
        } else {
            q.payload = strictify_graph(denote(cur->query(), path.arity, path.cap),
                                        path.strict.with(i));
        }
        const PathItem* hit = nullptr;
        for (const PathItem& it : path.items)
            if (item_answers(it, q)) {
                hit = &it;
                break;
            }
        if (!hit) {
            PathEvalResult r;
            r.stop = PathEvalResult::Stop::Unanswered;
            r.value = NatBot::bot();
            r.halted_at = cur->query();
            r.query = q;
            return r;
        }
        const ProcPtr* body = cur->branch(hit->answer);
        if (!body) {
            PathEvalResult r;
            r.stop = PathEvalResult::Stop::BotLeaf;
            r.value = NatBot::bot();
            return r;
        }
        cur = *body;
    }
}

// The query a blocked run is waiting on.
inline SQuery find_critical(const ProcPtr& p, const Path& path) {
    PathEvalResult r = eval_on_path(p, path);
    if (r.stop != PathEvalResult::Stop::Unanswered)
        throw std::logic_error("find_critical: evaluation was not blocked on a query");
    return r.query;
}

// A query is critical for a functional at a path when no matching tuple
// can reach a numeral while leaving that query unanswered.
inline bool is_critical(const FunGraph& f, const Path& path, const SQuery& q) {
    if (f.arity() != path.arity || f.cap() != path.cap)
        throw std::invalid_argument("is_critical: shape mismatch");
    const auto& space = tuple_space(path.arity, path.cap);
    for (const ArgTuple& v : space) {
        if (!matches(v, path)) continue;
        if (query_answer(q, v).is_bot() && f.apply(v).is_num()) return false;
    }
    return true;
}

// Diagnostic: the first cap at which a query stops being critical for the
// truncated functional and path, scanning downward; nothing if it stays
// critical all the way to cap 0.
inline std::optional<int> check_criticality_projection(const FunGraph& f, const Path& path,
                                                       const SQuery& q) {
    for (int k = path.cap; k >= 0; --k) {
        SQuery qk = q;
        if (!q.is_constant()) qk.payload = project_fun(q.graph(), k);
        if (!is_critical(project_fun(f, k), project_path(path, k), qk))
            return k;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text form.  Functional payloads refer into a caller-supplied graph list:
//
//     path n=2 k=1 S={1}
//     i=1 G=0 b=1
//     i=2 G=@0 b=0
//
// "G=<numeral>" is a numeral query, "G=@j" the j-th supplied graph.
// path_graphs collects the payload graphs of a path in first-use order,
// deduplicated, matching the indices to_string emits.

inline std::vector<FunGraph> path_graphs(const Path& path) {
    std::vector<FunGraph> out;
    for (const PathItem& it : path.items) {
        if (it.query.is_constant()) continue;
        bool seen = false;
        for (const FunGraph& g : out)
            if (g == it.query.graph()) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(it.query.graph());
    }
    return out;
}

inline std::string to_string(const Path& path) {
    std::vector<FunGraph> graphs = path_graphs(path);
    std::string s = "path n=" + std::to_string(path.arity) +
                    " k=" + std::to_string(path.cap) + " S=" + path.strict.to_string() +
                    "\n";
    for (const PathItem& it : path.items) {
        s += "i=" + std::to_string(it.query.var) + " G=";
        if (it.query.is_constant()) {
            s += std::to_string(it.query.constant());
        } else {
            size_t j = 0;
            while (!(graphs[j] == it.query.graph())) ++j;
            s += "@" + std::to_string(j);
        }
        s += " b=" + std::to_string(it.answer) + "\n";
    }
    return s;
}

inline Path parse_path(const std::string& text, const std::vector<FunGraph>& graphs) {
    std::istringstream in(text);
    std::string line;
    Path path;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        size_t p = 0;
        detail::skip_ws(line, p);
        if (p >= line.size()) continue;
        if (!header_seen) {
            if (line.compare(p, 4, "path") != 0)
                throw ParseError("expected 'path n=N k=K S={..}' header", lineno, 1);
            p += 4;
            detail::skip_ws(line, p);
            if (line.compare(p, 2, "n=") != 0) throw ParseError("expected n=", lineno, 1);
            p += 2;
            path.arity = detail::parse_natbot_at(line, p).num();
            detail::skip_ws(line, p);
            if (line.compare(p, 2, "k=") != 0) throw ParseError("expected k=", lineno, 1);
            p += 2;
            path.cap = detail::parse_natbot_at(line, p).num();
            detail::skip_ws(line, p);
            if (line.compare(p, 2, "S=") != 0) throw ParseError("expected S=", lineno, 1);
            p += 2;
            path.strict = StrictSet::parse(line.substr(p));
            header_seen = true;
            continue;
        }
        PathItem item;
        if (line.compare(p, 2, "i=") != 0) throw ParseError("expected i=", lineno, 1);
        p += 2;
        item.query.var = detail::parse_natbot_at(line, p).num();
        detail::skip_ws(line, p);
        if (line.compare(p, 2, "G=") != 0) throw ParseError("expected G=", lineno, 1);
        p += 2;
        detail::skip_ws(line, p);
        if (p < line.size() && line[p] == '@') {
            ++p;
            NatBot idx = detail::parse_natbot_at(line, p);
            if (idx.is_bot() || static_cast<size_t>(idx.num()) >= graphs.size())
                throw ParseError("graph reference out of range", lineno, 1);
            item.query.payload = graphs[idx.num()];
        } else {
            item.query.payload = detail::parse_natbot_at(line, p).num();
        }
        detail::skip_ws(line, p);
        if (line.compare(p, 2, "b=") != 0) throw ParseError("expected b=", lineno, 1);
        p += 2;
        item.answer = detail::parse_natbot_at(line, p).num();
        path.items.push_back(std::move(item));
    }
    if (!header_seen) throw ParseError("missing 'path' header", 1, 1);
    if (auto err = path_error(path)) throw std::invalid_argument("parse_path: " + *err);
    return path;
}

// Several "graph ..." blocks in one body, in order.
inline std::vector<FunGraph> parse_graph_list(const std::string& text) {
    std::vector<FunGraph> out;
    std::istringstream in(text);
    std::string line, block;
    auto flush = [&]() {
        if (block.find_first_not_of(" \t\r\n") == std::string::npos) return;
        out.push_back(parse_graph(block));
        block.clear();
    };
    while (std::getline(in, line)) {
        if (line.rfind("graph", 0) == 0) flush();
        block += line + "\n";
    }
    flush();
    return out;
}

}  // namespace seqproc
