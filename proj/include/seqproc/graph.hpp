#pragma once

// Finite graphs of monotone functionals.  At arity n and cap k the
// argument space I is the (finite) set of n-tuples of monotone unary
// functions; a FunGraph tabulates one functional I -> {bot,0..k} over the
// canonical tuple indexing.  On top of that sit the denotation of
// procedure terms, strictification, cap changes, and the closure that
// enumerates exactly the functionals some term computes, each carried
// with a witnessing term.

#include <seqproc/eval.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace seqproc {

// Cached tuple spaces, indexed canonically (position 1 most significant).
// Guarded: beyond ~a hundred thousand tuples nothing here is usable
// anyway, so refuse early instead of thrashing.
inline const std::vector<ArgTuple>& tuple_space(int n, int k) {
    if (n < 1 || n > 4 || k < 0 || k > 6)
        throw std::invalid_argument("tuple_space: parameters out of supported range");
    if (tuple_count(n, k) > 200000)
        throw std::invalid_argument("tuple_space: space too large to materialize");
    static std::map<std::pair<int, int>, std::vector<ArgTuple>> cache;
    auto [it, fresh] = cache.try_emplace({n, k});
    if (fresh) {
        const std::uint64_t total = tuple_count(n, k);
        it->second.reserve(total);
        for (std::uint64_t i = 0; i < total; ++i) it->second.push_back(tuple_at(n, k, i));
    }
    return it->second;
}

// Pairwise order on function indices at a cap, cached as a dense matrix.
inline const std::vector<bool>& mono_leq_matrix(int k) {
    static std::map<int, std::vector<bool>> cache;
    auto [it, fresh] = cache.try_emplace(k);
    if (fresh) {
        const auto& space = monofn_space(k);
        const size_t m = space.size();
        it->second.resize(m * m);
        for (size_t a = 0; a < m; ++a)
            for (size_t b = 0; b < m; ++b)
                it->second[a * m + b] = mono_leq(space[a], space[b]);
    }
    return it->second;
}

class FunGraph {
public:
    FunGraph(int arity, int cap, std::vector<NatBot> table)
        : arity_(arity), cap_(cap), table_(std::move(table)) {
        if (arity_ < 1 || cap_ < 0) throw std::invalid_argument("FunGraph: bad parameters");
        if (table_.size() != tuple_count(arity_, cap_))
            throw std::invalid_argument("FunGraph: table size mismatch");
        for (NatBot v : table_)
            if (v.is_num() && v.num() > cap_)
                throw std::invalid_argument("FunGraph: value above cap");
    }

    static FunGraph bottom(int arity, int cap) {
        return FunGraph(arity, cap,
                        std::vector<NatBot>(tuple_count(arity, cap), NatBot::bot()));
    }
    static FunGraph constant(int arity, int cap, NatBot v) {
        return FunGraph(arity, cap, std::vector<NatBot>(tuple_count(arity, cap), v));
    }
    template <class Fn>  // Fn: const ArgTuple& -> NatBot
    static FunGraph from_fn(int arity, int cap, Fn&& fn) {
        const auto& space = tuple_space(arity, cap);
        std::vector<NatBot> t;
        t.reserve(space.size());
        for (const ArgTuple& v : space) t.push_back(fn(v));
        return FunGraph(arity, cap, std::move(t));
    }

    int arity() const { return arity_; }
    int cap() const { return cap_; }
    const std::vector<NatBot>& table() const { return table_; }
    NatBot at(std::uint64_t tuple_idx) const { return table_.at(tuple_idx); }
    NatBot apply(const ArgTuple& v) const {
        if (v.arity() != arity_ || v.cap() != cap_)
            throw std::invalid_argument("FunGraph: argument shape mismatch");
        return table_[tuple_index(v)];
    }

    friend bool operator==(const FunGraph& a, const FunGraph& b) {
        return a.arity_ == b.arity_ && a.cap_ == b.cap_ && a.table_ == b.table_;
    }
    friend bool operator!=(const FunGraph& a, const FunGraph& b) { return !(a == b); }

private:
    int arity_, cap_;
    std::vector<NatBot> table_;
};

// Value-code vector usable as an ordered map key.
inline std::vector<int> graph_key(const FunGraph& f) {
    std::vector<int> key;
    key.reserve(f.table().size());
    for (NatBot v : f.table()) key.push_back(v.code());
    return key;
}

inline bool tuple_leq_by_index(int n, int k, std::uint64_t a, std::uint64_t b) {
    const auto& mat = mono_leq_matrix(k);
    const std::uint64_t m = monofn_count(k);
    for (int i = 0; i < n; ++i) {
        if (!mat[(a % m) * m + (b % m)]) return false;
        a /= m;
        b /= m;
    }
    return a == 0 && b == 0;
}

inline bool is_monotone(const FunGraph& f) {
    const std::uint64_t total = f.table().size();
    for (std::uint64_t a = 0; a < total; ++a)
        for (std::uint64_t b = 0; b < total; ++b)
            if (tuple_leq_by_index(f.arity(), f.cap(), a, b) &&
                !flat_leq(f.at(a), f.at(b)))
                return false;
    return true;
}

inline bool graph_leq(const FunGraph& f, const FunGraph& g) {
    if (f.arity() != g.arity() || f.cap() != g.cap())
        throw std::invalid_argument("graph_leq: shape mismatch");
    for (size_t i = 0; i < f.table().size(); ++i)
        if (!flat_leq(f.table()[i], g.table()[i])) return false;
    return true;
}

// Pointwise lub; nullopt when some tuple carries two distinct numbers.
inline std::optional<FunGraph> graph_lub(const FunGraph& f, const FunGraph& g) {
    if (f.arity() != g.arity() || f.cap() != g.cap())
        throw std::invalid_argument("graph_lub: shape mismatch");
    std::vector<NatBot> t(f.table().size());
    for (size_t i = 0; i < t.size(); ++i) {
        auto v = flat_lub(f.table()[i], g.table()[i]);
        if (!v) return std::nullopt;
        t[i] = *v;
    }
    return FunGraph(f.arity(), f.cap(), std::move(t));
}

// ---------------------------------------------------------------------------
// Denotation: the functional a term computes at a given shape, values
// truncated to the cap.

inline FunGraph denote(const ProcPtr& p, int arity, int cap) {
    if (max_var(p) > arity) throw std::invalid_argument("denote: term uses missing variable");
    return FunGraph::from_fn(arity, cap, [&](const ArgTuple& v) {
        return flat_project(eval(p, v), cap);
    });
}

// Force bot at every tuple whose positions in S are not already strict:
// the result answers as f does on the largest S-strict tuple below the
// argument.
inline FunGraph strictify_graph(const FunGraph& f, StrictSet s) {
    return FunGraph::from_fn(f.arity(), f.cap(), [&](const ArgTuple& v) {
        return f.apply(strictify_args(v, s));
    });
}

// Cap changes.  embed answers as f does on the projected argument;
// project answers as the truncation of f on the embedded argument.
// project_fun(embed_fun(f, K), cap(f)) == f.
inline FunGraph embed_fun(const FunGraph& f, int cap2) {
    if (cap2 < f.cap()) throw std::invalid_argument("embed_fun: target cap below cap");
    return FunGraph::from_fn(f.arity(), cap2, [&](const ArgTuple& v) {
        return f.apply(project_tuple(v, f.cap()));
    });
}

inline FunGraph project_fun(const FunGraph& f, int cap2) {
    if (cap2 > f.cap()) throw std::invalid_argument("project_fun: target cap above cap");
    return FunGraph::from_fn(f.arity(), cap2, [&](const ArgTuple& v) {
        return flat_project(f.apply(embed_tuple(v, f.cap())), cap2);
    });
}

// Graph-level analogue of a case node: query, ask position `var`, follow
// the branch for the answer.  branches[a] == nullopt means no branch.
inline FunGraph case_combine(int var, const FunGraph& query,
                             const std::vector<std::optional<FunGraph>>& branches) {
    if (var < 1 || var > query.arity())
        throw std::invalid_argument("case_combine: bad position");
    if (static_cast<int>(branches.size()) != query.cap() + 1)
        throw std::invalid_argument("case_combine: need one branch slot per numeral");
    for (const auto& b : branches)
        if (b && (b->arity() != query.arity() || b->cap() != query.cap()))
            throw std::invalid_argument("case_combine: branch shape mismatch");
    const auto& space = tuple_space(query.arity(), query.cap());
    std::vector<NatBot> t(space.size(), NatBot::bot());
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        NatBot a = space[i].at(var).apply(query.at(i));
        if (a.is_num() && branches[a.num()]) t[i] = branches[a.num()]->at(i);
    }
    return FunGraph(query.arity(), query.cap(), std::move(t));
}

// ---------------------------------------------------------------------------
// The catalog of term-computable functionals at a shape.  Built as a
// closure: constants are computable, and so is any case assembled from a
// computable query and computable branch bodies.  The key fact keeping
// this tractable: for a fixed query and position, the assembled graph
// depends on each branch body only through its restriction to the tuples
// whose oracle answer selects that branch, and every combination of such
// restrictions is itself computable.  So combinations are enumerated over
// deduplicated restrictions, and the number of distinct results per
// (position, query) pair never exceeds the size of the finished catalog.

struct CatalogEntry {
    FunGraph graph;
    ProcPtr witness;  // term with denote(witness) == graph
};

struct ClosureBudget {
    std::uint64_t max_members = 20000;
    int max_rounds = 64;
};

struct SeqCatalog {
    int arity = 0;
    int cap = 0;
    bool complete = false;
    int rounds_used = 0;
    std::vector<CatalogEntry> members;
    std::map<std::vector<int>, size_t> index;

    size_t size() const { return members.size(); }
    const CatalogEntry* find(const FunGraph& g) const {
        auto it = index.find(graph_key(g));
        return it == index.end() ? nullptr : &members[it->second];
    }
    // True if the graph was new.
    bool add(FunGraph g, ProcPtr witness) {
        auto key = graph_key(g);
        auto [it, fresh] = index.try_emplace(std::move(key), members.size());
        if (fresh) members.push_back({std::move(g), std::move(witness)});
        return fresh;
    }
};

inline SeqCatalog enumerate_sequentials(int n, int k, ClosureBudget budget = {}) {
    SeqCatalog cat;
    cat.arity = n;
    cat.cap = k;
    cat.add(FunGraph::bottom(n, k), Proc::bottom());
    for (int c = 0; c <= k; ++c)
        cat.add(FunGraph::constant(n, k, NatBot::of(c)), Proc::constant(c));

    const auto& space = tuple_space(n, k);
    const std::uint64_t total = space.size();
    bool budget_hit = false;

    for (int round = 1; round <= budget.max_rounds && !budget_hit; ++round) {
        cat.rounds_used = round;
        bool changed = false;
        const size_t snapshot = cat.size();
        for (size_t gi = 0; gi < snapshot && !budget_hit; ++gi) {
            for (int var = 1; var <= n && !budget_hit; ++var) {
                // Partition tuples by the oracle's answer to this query.
                std::vector<std::vector<std::uint32_t>> classes(k + 1);
                for (std::uint64_t t = 0; t < total; ++t) {
                    NatBot a = space[t].at(var).apply(cat.members[gi].graph.at(t));
                    if (a.is_num()) classes[a.num()].push_back(static_cast<std::uint32_t>(t));
                }
                // Distinct member restrictions per non-empty class.  The
                // bot member is member 0, so the all-bot restriction (an
                // absent branch) is always represented.
                std::vector<int> labels;
                std::vector<std::vector<std::pair<std::vector<int>, size_t>>> options;
                for (int a = 0; a <= k; ++a) {
                    if (classes[a].empty()) continue;
                    std::map<std::vector<int>, size_t> restr;
                    for (size_t mi = 0; mi < cat.size(); ++mi) {
                        std::vector<int> rk;
                        rk.reserve(classes[a].size());
                        for (std::uint32_t t : classes[a])
                            rk.push_back(cat.members[mi].graph.at(t).code());
                        restr.try_emplace(std::move(rk), mi);
                    }
                    labels.push_back(a);
                    options.emplace_back(restr.begin(), restr.end());
                }
                // Every combination of class restrictions, written into a
                // shared buffer; each is a computable graph.
                std::vector<NatBot> buffer(total, NatBot::bot());
                std::vector<size_t> chosen(labels.size());
                auto assemble = [&](auto&& self, size_t li) -> void {
                    if (budget_hit) return;
                    if (li == labels.size()) {
                        BranchList brs;
                        for (size_t j = 0; j < labels.size(); ++j) {
                            size_t mi = options[j][chosen[j]].second;
                            if (mi == 0) continue;  // bot branch == absent
                            brs.emplace_back(labels[j], cat.members[mi].witness);
                        }
                        ProcPtr w = Proc::make_case(var, cat.members[gi].witness,
                                                    std::move(brs));
                        if (cat.add(FunGraph(n, k, buffer), std::move(w))) changed = true;
                        if (cat.size() > budget.max_members) budget_hit = true;
                        return;
                    }
                    const int a = labels[li];
                    for (size_t oi = 0; oi < options[li].size(); ++oi) {
                        chosen[li] = oi;
                        const auto& rk = options[li][oi].first;
                        for (size_t p = 0; p < classes[a].size(); ++p)
                            buffer[classes[a][p]] = rk[p] < 0 ? NatBot::bot()
                                                              : NatBot::of(rk[p]);
                        self(self, li + 1);
                    }
                };
                assemble(assemble, 0);
            }
        }
        if (!changed) {
            cat.complete = !budget_hit;
            break;
        }
    }
    if (budget_hit) cat.complete = false;
    return cat;
}

// ---------------------------------------------------------------------------
// Queries against a catalog.

struct SeqDecision {
    enum class Status { Yes, No, Unknown };
    Status status = Status::Unknown;
    ProcPtr witness;  // set when Yes
};

inline SeqDecision is_sequential(const FunGraph& f, const SeqCatalog& cat) {
    if (f.arity() != cat.arity || f.cap() != cat.cap)
        throw std::invalid_argument("is_sequential: shape mismatch with catalog");
    if (const CatalogEntry* e = cat.find(f)) return {SeqDecision::Status::Yes, e->witness};
    return {cat.complete ? SeqDecision::Status::No : SeqDecision::Status::Unknown, nullptr};
}

// Least computable upper bound of two graphs, searched in the catalog.
// In a finite order a unique minimal upper bound is the least one; several
// minimal upper bounds mean no least exists.  Requires a complete catalog
// for its verdicts to mean anything, and refuses otherwise.
struct LubOutcome {
    enum class Status { Value, None, NoLeast };
    Status status = Status::None;
    std::optional<CatalogEntry> least;   // Value
    std::vector<size_t> minimal;         // NoLeast: member indices
};

inline LubOutcome seq_lub(const FunGraph& f, const FunGraph& g, const SeqCatalog& cat) {
    if (!cat.complete) throw std::invalid_argument("seq_lub: catalog is incomplete");
    if (f.arity() != cat.arity || f.cap() != cat.cap || g.arity() != cat.arity ||
        g.cap() != cat.cap)
        throw std::invalid_argument("seq_lub: shape mismatch with catalog");
    std::vector<size_t> uppers;
    for (size_t i = 0; i < cat.size(); ++i)
        if (graph_leq(f, cat.members[i].graph) && graph_leq(g, cat.members[i].graph))
            uppers.push_back(i);
    LubOutcome out;
    if (uppers.empty()) return out;  // None
    std::vector<size_t> minimal;
    for (size_t i : uppers) {
        bool is_min = true;
        for (size_t j : uppers)
            if (j != i && graph_leq(cat.members[j].graph, cat.members[i].graph) &&
                cat.members[j].graph != cat.members[i].graph) {
                is_min = false;
                break;
            }
        if (is_min) minimal.push_back(i);
    }
    if (minimal.size() == 1) {
        out.status = LubOutcome::Status::Value;
        out.least = cat.members[minimal.front()];
    } else {
        out.status = LubOutcome::Status::NoLeast;
        out.minimal = std::move(minimal);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text form for graphs:
//
//     graph n=2 k=1
//     0 -> bot
//     1 -> 0
//
// Indices may be sparse (missing entries are bot) but must be in range.

inline std::string to_string(const FunGraph& f) {
    std::string s =
        "graph n=" + std::to_string(f.arity()) + " k=" + std::to_string(f.cap()) + "\n";
    for (std::uint64_t i = 0; i < f.table().size(); ++i)
        s += std::to_string(i) + " -> " + to_string(f.table()[i]) + "\n";
    return s;
}

inline FunGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, k = -1;
    std::vector<NatBot> table;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        size_t p = 0;
        detail::skip_ws(line, p);
        if (p >= line.size()) continue;
        if (!header_seen) {
            if (line.compare(p, 5, "graph") != 0)
                throw ParseError("expected 'graph n=N k=K' header", lineno, 1);
            p += 5;
            detail::skip_ws(line, p);
            if (line.compare(p, 2, "n=") != 0) throw ParseError("expected n=", lineno, 1);
            p += 2;
            n = detail::parse_natbot_at(line, p).num();
            detail::skip_ws(line, p);
            if (line.compare(p, 2, "k=") != 0) throw ParseError("expected k=", lineno, 1);
            p += 2;
            k = detail::parse_natbot_at(line, p).num();
            if (n < 1 || k < 0) throw ParseError("bad graph shape", lineno, 1);
            table.assign(tuple_count(n, k), NatBot::bot());
            header_seen = true;
            continue;
        }
        NatBot idx = detail::parse_natbot_at(line, p);
        if (idx.is_bot()) throw ParseError("expected a tuple index", lineno, 1);
        detail::skip_ws(line, p);
        if (line.compare(p, 2, "->") != 0) throw ParseError("expected '->'", lineno, 1);
        p += 2;
        NatBot val = detail::parse_natbot_at(line, p);
        detail::skip_ws(line, p);
        if (p != line.size()) throw ParseError("trailing input after value", lineno, 1);
        if (static_cast<std::uint64_t>(idx.num()) >= table.size())
            throw ParseError("tuple index out of range", lineno, 1);
        table[idx.num()] = val;
    }
    if (!header_seen) throw ParseError("missing 'graph' header", 1, 1);
    FunGraph g(n, k, std::move(table));
    if (!is_monotone(g)) throw std::invalid_argument("parse_graph: table is not monotone");
    return g;
}

// Catalog text form: a header, then one block per member with its witness
// term and the graph's value row in index order.

inline std::string to_string(const SeqCatalog& cat) {
    std::string s = "catalog n=" + std::to_string(cat.arity) +
                    " k=" + std::to_string(cat.cap) +
                    " complete=" + (cat.complete ? "yes" : "no") +
                    " members=" + std::to_string(cat.size()) + "\n";
    for (size_t i = 0; i < cat.size(); ++i) {
        s += "member " + std::to_string(i) + "\n";
        s += "witness: " + pretty(cat.members[i].witness) + "\n";
        s += "table:";
        for (NatBot v : cat.members[i].graph.table()) s += " " + to_string(v);
        s += "\n";
    }
    return s;
}

inline SeqCatalog parse_catalog(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty catalog", 1, 1);
    SeqCatalog cat;
    size_t declared = 0;
    {
        std::istringstream h(line);
        std::string word;
        h >> word;
        if (word != "catalog") throw ParseError("expected 'catalog' header", 1, 1);
        while (h >> word) {
            if (word.rfind("n=", 0) == 0) cat.arity = std::stoi(word.substr(2));
            else if (word.rfind("k=", 0) == 0) cat.cap = std::stoi(word.substr(2));
            else if (word.rfind("complete=", 0) == 0) cat.complete = word.substr(9) == "yes";
            else if (word.rfind("members=", 0) == 0) declared = std::stoul(word.substr(8));
            else throw ParseError("unknown catalog header field '" + word + "'", 1, 1);
        }
    }
    if (cat.arity < 1 || cat.cap < 0) throw ParseError("bad catalog shape", 1, 1);
    const std::uint64_t total = tuple_count(cat.arity, cat.cap);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("member", 0) != 0) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError("expected 'member <i>'", lineno, 1);
        }
        std::string wline, tline;
        if (!std::getline(in, wline) || wline.rfind("witness: ", 0) != 0)
            throw ParseError("expected 'witness: <term>'", lineno + 1, 1);
        if (!std::getline(in, tline) || tline.rfind("table:", 0) != 0)
            throw ParseError("expected 'table: <values>'", lineno + 2, 1);
        lineno += 2;
        ProcPtr w = parse_proc(wline.substr(9));
        std::vector<NatBot> tab;
        size_t p = 6;
        while (p < tline.size()) {
            detail::skip_ws(tline, p);
            if (p >= tline.size()) break;
            tab.push_back(detail::parse_natbot_at(tline, p));
        }
        if (tab.size() != total) throw ParseError("table length mismatch", lineno, 1);
        FunGraph g(cat.arity, cat.cap, std::move(tab));
        if (denote(w, cat.arity, cat.cap) != g)
            throw std::invalid_argument("parse_catalog: witness does not compute its graph");
        if (!cat.add(std::move(g), std::move(w)))
            throw std::invalid_argument("parse_catalog: duplicate member");
    }
    if (declared != cat.size())
        throw std::invalid_argument("parse_catalog: member count mismatch");
    return cat;
}

}  // namespace seqproc
