#pragma once
// Increasing chains of procedures and the least-upper-bound machinery built
// on top of them: a coherence contract between adjacent levels, chain
// normalization, evaluation of the chain's lub at a concrete argument tuple
// by growing a path of answered queries, and synthesis of a single
// procedure denoting that lub.
//
// A chain holds one procedure per level l; the level-l functional is the
// cap-l denotation of the level's term after projecting stray numerals.
// The evaluation walk keeps, per level, the S-normal form of the level
// term, its strictified denotation, and the set of tuples still matching
// the path built so far.  Each round either resolves the value of the
// working level's normal form on the path, certifies bottom, or extends
// the path with the query that normal form is blocked on, answered by the
// input.  Lower levels are inspected every round but never decide the
// output, and what they resolve is advisory only: projecting a path item's
// payload can only make it answer more queries, so a lower level may
// resolve a value -- even a wrong one -- that its projected items do not
// actually pin down for the real input.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqproc/eval.hpp"
#include "seqproc/graph.hpp"
#include "seqproc/normal.hpp"
#include "seqproc/path.hpp"
#include "seqproc/proc.hpp"

namespace seqproc {

inline constexpr std::uint64_t kDefaultFuel = 10000;

// Raised when a structural claim the walk relies on fails at run time:
// a chosen query that is not critical at some level, a pivotal level that
// moves back down, a working level that reaches a bot leaf while a defined
// tuple still matches.  Any such failure is a bug or a broken chain
// contract, never a property of the input tuple.
class ChainContractError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Chains

class Chain {
  public:
    // Levels 0..K given explicitly; level l is read at cap l.
    static Chain truncated(int arity, std::vector<ProcPtr> levels) {
        if (arity < 1) throw std::invalid_argument("Chain: arity must be >= 1");
        if (levels.empty()) throw std::invalid_argument("Chain: no levels");
        for (const ProcPtr& p : levels) {
            if (!p) throw std::invalid_argument("Chain: null level");
            if (max_var(p) > arity)
                throw std::invalid_argument("Chain: level uses missing position");
        }
        Chain c;
        c.arity_ = arity;
        c.levels_ = std::move(levels);
        return c;
    }

    // Levels produced on demand by a pure generator, up to a ceiling the
    // evaluator will not look beyond.
    static Chain lazy(int arity, std::function<ProcPtr(int)> gen, int ceiling) {
        if (arity < 1) throw std::invalid_argument("Chain: arity must be >= 1");
        if (!gen) throw std::invalid_argument("Chain: null generator");
        if (ceiling < 0) throw std::invalid_argument("Chain: negative ceiling");
        Chain c;
        c.arity_ = arity;
        c.gen_ = std::move(gen);
        c.ceiling_ = ceiling;
        c.cache_ = std::make_shared<std::map<int, ProcPtr>>();
        return c;
    }

    bool is_lazy() const { return static_cast<bool>(gen_); }
    int arity() const { return arity_; }

    // Highest level the chain can produce.
    int top() const { return is_lazy() ? ceiling_ : static_cast<int>(levels_.size()) - 1; }
    int ceiling() const {
        if (!is_lazy()) throw std::logic_error("Chain: ceiling of a truncated chain");
        return ceiling_;
    }

    ProcPtr level(int l) const {
        if (l < 0 || l > top()) throw std::out_of_range("Chain: level out of range");
        if (!is_lazy()) return levels_[static_cast<size_t>(l)];
        auto it = cache_->find(l);
        if (it != cache_->end()) return it->second;
        ProcPtr p = gen_(l);
        if (!p) throw std::invalid_argument("Chain: generator produced no term");
        if (max_var(p) > arity_)
            throw std::invalid_argument("Chain: generated level uses missing position");
        (*cache_)[l] = p;
        return p;
    }

    // The first levels of this chain as a truncated chain.
    Chain prefix(int up_to) const {
        up_to = std::min(up_to, top());
        std::vector<ProcPtr> levels;
        levels.reserve(static_cast<size_t>(up_to) + 1);
        for (int l = 0; l <= up_to; ++l) levels.push_back(level(l));
        return truncated(arity_, std::move(levels));
    }

  private:
    Chain() = default;
    int arity_ = 1;
    std::vector<ProcPtr> levels_;
    std::function<ProcPtr(int)> gen_;
    int ceiling_ = 0;
    std::shared_ptr<std::map<int, ProcPtr>> cache_;  // copies share produced levels
};

// Chain whose level l is the cap-l projection of one fixed term.  Coherent
// and increasing by construction.
inline Chain projection_chain(const ProcPtr& p, int arity, int top) {
    std::vector<ProcPtr> levels;
    levels.reserve(static_cast<size_t>(top) + 1);
    for (int l = 0; l <= top; ++l) levels.push_back(project_proc(p, l));
    return Chain::truncated(arity, std::move(levels));
}

// Lazy chain repeating one term at every level.
inline Chain constant_chain(const ProcPtr& p, int arity, int ceiling) {
    if (!p) throw std::invalid_argument("constant_chain: null term");
    return Chain::lazy(arity, [p](int) { return p; }, ceiling);
}

// The cap-l functional a chain level denotes.
inline FunGraph chain_fun(const Chain& c, int l) {
    return denote(project_proc(c.level(l), l), c.arity(), l);
}

// ---------------------------------------------------------------------------
// Contract checking and normalization

struct ChainViolation {
    int level = 0;  // lower level of the offending pair, or the single level
    std::string what;
};

struct ChainReport {
    bool ok = true;
    std::vector<ChainViolation> violations;
};

// Verifies, on levels up to the requested one, that every level functional
// is monotone, that consecutive levels increase, and that the lower level
// is the projection of the higher one.
inline ChainReport chain_check(const Chain& c, int up_to_level) {
    ChainReport rep;
    const int hi = std::min(up_to_level, c.top());
    std::vector<FunGraph> funs;
    funs.reserve(static_cast<size_t>(hi) + 1);
    for (int l = 0; l <= hi; ++l) {
        funs.push_back(chain_fun(c, l));
        if (!is_monotone(funs.back()))
            rep.violations.push_back({l, "level functional is not monotone"});
    }
    for (int l = 0; l + 1 <= hi; ++l) {
        const std::string pair =
            "(" + std::to_string(l) + "," + std::to_string(l + 1) + ")";
        if (!graph_leq(embed_fun(funs[static_cast<size_t>(l)], l + 1),
                       funs[static_cast<size_t>(l) + 1]))
            rep.violations.push_back({l, "levels " + pair + ": not increasing"});
        if (project_fun(funs[static_cast<size_t>(l) + 1], l) != funs[static_cast<size_t>(l)])
            rep.violations.push_back({l, "levels " + pair + ": not projection-coherent"});
    }
    rep.ok = rep.violations.empty();
    return rep;
}

struct NormalizedChain {
    Chain chain;                 // truncated and projection-coherent
    bool exact = true;           // false when read off a generator at its ceiling
    std::vector<int> unstable;   // levels whose projected value was still moving
};

// Rebuilds each level as the projection of everything above it.  For an
// increasing chain the per-level joins collapse to the projection of the
// highest inspected level, which is what gets emitted.  Lazy chains are
// read up to their ceiling; a level counts as stable only when its
// projected functional held still for at least one further level, so the
// ceiling level itself is always reported unstable.
inline NormalizedChain normalize_chain(const Chain& c, int up_to_level) {
    const int n = c.arity();
    if (!c.is_lazy()) {
        const int hi = std::min(up_to_level, c.top());
        const ProcPtr source = c.level(c.top());
        std::vector<ProcPtr> levels;
        levels.reserve(static_cast<size_t>(hi) + 1);
        for (int l = 0; l <= hi; ++l) levels.push_back(project_proc(source, l));
        return {Chain::truncated(n, std::move(levels)), true, {}};
    }
    const int top = c.ceiling();
    const int hi = std::min(up_to_level, top);
    std::vector<FunGraph> funs;
    funs.reserve(static_cast<size_t>(top) + 1);
    for (int l = 0; l <= top; ++l) funs.push_back(chain_fun(c, l));
    NormalizedChain out{Chain::truncated(n, {Proc::bottom()}), false, {}};
    std::vector<ProcPtr> levels;
    for (int k = 0; k <= hi; ++k) {
        int last_change = k;  // level at which the projected value last moved
        FunGraph cur = funs[static_cast<size_t>(k)];
        for (int l = k + 1; l <= top; ++l) {
            FunGraph next = project_fun(funs[static_cast<size_t>(l)], k);
            if (next != cur) {
                cur = std::move(next);
                last_change = l;
            }
        }
        if (last_change == top) out.unstable.push_back(k);
        levels.push_back(project_proc(c.level(top), k));
    }
    out.chain = Chain::truncated(n, std::move(levels));
    return out;
}

// ---------------------------------------------------------------------------
// Lub evaluation

struct LubResult {
    enum class Status { Value, Bottom, FuelExhausted };
    Status status = Status::FuelExhausted;
    NatBot value;              // numeric only when status == Value
    int level = -1;            // level whose normal form resolved a value,
                               // or the chain top for a certified bottom
    std::uint64_t fuel_used = 0;
    int extensions = 0;        // path items added along the way
};

inline std::string to_string(LubResult::Status s) {
    switch (s) {
        case LubResult::Status::Value: return "value";
        case LubResult::Status::Bottom: return "bot";
        case LubResult::Status::FuelExhausted: return "fuel-exhausted";
    }
    return "?";
}

// One path extension, as reported to an observer: the minimal level the
// choice was made at and the item appended (payload at the working cap).
struct LubStep {
    int pivot = 0;
    PathItem item;
};
using LubObserver = std::function<void(const LubStep&)>;

// The query selected in a blocked situation: its position, the shared
// constant when the position is strict, the payloads for every level from
// the pivotal one up to the working cap (projection-coherent by
// construction), and the syntactic query subterm the working level was
// blocked on, for functional payloads.
struct ChosenQuery {
    int var = 0;
    bool constant = false;
    int constant_value = -1;
    int pivot = 0;
    std::vector<SQuery> per_level;  // levels pivot..top, in that order
    ProcPtr witness;                // empty for constant payloads
};

// Reusable evaluation engine for one truncated chain and one strict set.
// Construction pays for the per-level normal forms and denotations once;
// eval() then walks one input tuple, and the synthesizer drives the same
// Walk/probe interface symbolically.
class LubEvaluator {
  public:
    LubEvaluator(const Chain& chain, StrictSet strict)
        : n_(chain.arity()), strict_(strict), top_(chain.top()) {
        if (chain.is_lazy())
            throw std::invalid_argument("LubEvaluator: chain must be truncated");
        if (!strict_.subset_of(StrictSet::full(n_)))
            throw std::invalid_argument("LubEvaluator: strict set out of range");
        for (int l = 0; l <= top_; ++l) {
            ProcPtr leveled = project_proc(chain.level(l), l);
            normals_.push_back(snormalize(leveled, strict_));
            funs_.push_back(denote(leveled, n_, l));
            stricts_.push_back(strictify_graph(funs_.back(), strict_));
            const auto& space = tuple_space(n_, l);
            std::vector<char> def(space.size());
            for (size_t i = 0; i < space.size(); ++i)
                def[i] = stricts_.back().at(i).is_num() ? 1 : 0;
            defined_.push_back(std::move(def));
        }
    }

    int arity() const { return n_; }
    int top() const { return top_; }
    StrictSet strict() const { return strict_; }
    const ProcPtr& level_normal(int l) const { return normals_.at(static_cast<size_t>(l)); }
    const FunGraph& level_fun(int l) const { return funs_.at(static_cast<size_t>(l)); }
    const FunGraph& level_strict(int l) const { return stricts_.at(static_cast<size_t>(l)); }

    // Outcome of one round against the current path.
    struct Probe {
        enum class Kind { Value, Bottom, NeedAnswer, Exhausted };
        Kind kind = Kind::Exhausted;
        NatBot value;
        int level = -1;
        ChosenQuery chosen;
    };

    // The mutable state of one evaluation: the path, its per-level
    // projections, and the indices of the tuples still matching at each
    // level.  Copyable, so a synthesizer can fork it per answer.
    struct Walk {
        explicit Walk(const LubEvaluator& e) : ev(&e) {
            theta = Path{e.n_, e.top_, e.strict_, {}};
            for (int l = 0; l <= e.top_; ++l) {
                proj.push_back(Path{e.n_, l, e.strict_, {}});
                const auto total = tuple_count(e.n_, l);
                std::vector<std::uint32_t> all(total);
                for (std::uint64_t i = 0; i < total; ++i)
                    all[i] = static_cast<std::uint32_t>(i);
                live.push_back(std::move(all));
            }
        }

        // Runs steps 1 and 2 and, in a blocked situation, step-3 selection.
        // Consumes one fuel unit per level inspected; when the budget runs
        // out mid-round the probe reports exhaustion.
        Probe probe(std::uint64_t fuel, std::uint64_t& used) {
            Probe out;
            // Step 1: run every level's normal form on its projected path.
            // The working level decides: its path answers were recorded
            // verbatim from the input, so a resolution there is binding.
            // Lower levels see over-truncated payloads that may answer
            // queries the input never did, so what they resolve is
            // advisory: it neither fires a value nor has to agree.
            std::vector<PathEvalResult> results;
            results.reserve(static_cast<size_t>(ev->top_) + 1);
            for (int l = 0; l <= ev->top_; ++l) {
                if (used >= fuel) return out;
                ++used;
                results.push_back(eval_on_path(ev->normals_[static_cast<size_t>(l)],
                                               proj[static_cast<size_t>(l)]));
            }
            const PathEvalResult& at_top = results.back();
            if (at_top.stop == PathEvalResult::Stop::Value) {
                int min_level = ev->top_;
                for (int l = ev->top_; l-- > 0;) {
                    const PathEvalResult& r = results[static_cast<size_t>(l)];
                    if (r.stop != PathEvalResult::Stop::Value ||
                        r.value != at_top.value)
                        break;
                    min_level = l;
                }
                out.kind = Probe::Kind::Value;
                out.level = min_level;
                out.value = at_top.value;
                return out;
            }
            // Step 2: find the minimal level where some matching tuple is
            // still defined; none anywhere certifies bottom.
            int pivot = -1;
            for (int l = 0; l <= ev->top_ && pivot < 0; ++l)
                for (std::uint32_t w : live[static_cast<size_t>(l)])
                    if (ev->defined_[static_cast<size_t>(l)][w]) {
                        pivot = l;
                        break;
                    }
            if (pivot < 0) {
                out.kind = Probe::Kind::Bottom;
                return out;
            }
            if (pivot < last_pivot)
                throw ChainContractError("pivotal level decreased from " +
                                         std::to_string(last_pivot) + " to " +
                                         std::to_string(pivot));
            last_pivot = pivot;
            // A defined matching tuple follows the path evaluation's route
            // through the working level's term, so that evaluation cannot
            // have reached bot: it must be blocked on a query.
            if (at_top.stop != PathEvalResult::Stop::Unanswered)
                throw ChainContractError(
                    "working level reaches bot while a defined tuple still matches");
            out.kind = Probe::Kind::NeedAnswer;
            out.chosen = ev->select(*this, pivot, at_top);
            return out;
        }

        // Appends an answered query and narrows every level's matching set.
        void extend(const SQuery& q, int b) {
            theta.items.push_back({q, b});
            ++extensions;
            for (int l = 0; l <= ev->top_; ++l) {
                SQuery ql = q;
                if (!q.is_constant()) ql.payload = project_fun(q.graph(), l);
                proj[static_cast<size_t>(l)].items.push_back({ql, b});
                const auto& space = tuple_space(ev->n_, l);
                auto& rows = live[static_cast<size_t>(l)];
                std::vector<std::uint32_t> kept;
                kept.reserve(rows.size());
                for (std::uint32_t w : rows)
                    if (query_answer(ql, space[w]) == NatBot::of(b)) kept.push_back(w);
                rows = std::move(kept);
            }
        }

        const LubEvaluator* ev;
        Path theta;                   // at the working cap
        std::vector<Path> proj;       // theta projected to each level
        std::vector<std::vector<std::uint32_t>> live;  // matching tuples per level
        int last_pivot = 0;
        int extensions = 0;
    };

    LubResult eval(const ArgTuple& v, std::uint64_t fuel = kDefaultFuel,
                   const LubObserver& obs = {}) const {
        if (v.arity() != n_)
            throw std::invalid_argument("eval_lub: tuple arity mismatch");
        if (v.cap() > top_)
            throw std::invalid_argument("eval_lub: tuple cap beyond the chain");
        const ArgTuple w = embed_tuple(v, top_);
        Walk walk(*this);
        LubResult out;
        for (;;) {
            Probe p = walk.probe(fuel, out.fuel_used);
            out.extensions = walk.extensions;
            if (p.kind == Probe::Kind::Exhausted) return out;
            if (p.kind == Probe::Kind::Value) {
                out.status = LubResult::Status::Value;
                out.value = p.value;
                out.level = p.level;
                return out;
            }
            if (p.kind == Probe::Kind::Bottom) {
                out.status = LubResult::Status::Bottom;
                out.value = NatBot::bot();
                out.level = top_;
                return out;
            }
            // A query was chosen; only here does the input get consulted.
            if (out.fuel_used >= fuel) return out;
            ++out.fuel_used;
            const SQuery& q = p.chosen.per_level.back();
            NatBot b = query_answer(q, w);
            if (b.is_bot()) {
                // The query is critical at the pivotal level, so a tuple
                // that cannot answer it gets no value from the chain.
                out.status = LubResult::Status::Bottom;
                out.value = NatBot::bot();
                out.level = top_;
                return out;
            }
            walk.extend(q, b.num());
            out.extensions = walk.extensions;
            if (obs) obs({p.chosen.pivot, walk.theta.items.back()});
        }
    }

    // Step-3 selection against an explicit path; pivot is the level the
    // per-level payload report starts from.
    ChosenQuery choose(const Path& theta, int pivot) const {
        if (theta.arity != n_ || theta.cap != top_ || !(theta.strict == strict_))
            throw std::invalid_argument("choose_query: path shape mismatch");
        if (pivot < 0 || pivot > top_)
            throw std::invalid_argument("choose_query: pivot out of range");
        Walk walk(*this);
        for (const PathItem& it : theta.items) walk.extend(it.query, it.answer);
        PathEvalResult r =
            eval_on_path(normals_[static_cast<size_t>(top_)], walk.theta);
        if (r.stop == PathEvalResult::Stop::Value)
            throw std::invalid_argument(
                "choose_query: path already resolves the working level");
        if (r.stop == PathEvalResult::Stop::BotLeaf)
            throw std::invalid_argument(
                "choose_query: path reaches bot at the working level");
        return select(walk, pivot, r);
    }

  private:
    // A query is critical at a level when every still-matching tuple with a
    // defined strictified value answers it numerically.
    bool critical_at(const Walk& walk, int l, const SQuery& q) const {
        const auto& space = tuple_space(n_, l);
        for (std::uint32_t w : walk.live[static_cast<size_t>(l)])
            if (defined_[static_cast<size_t>(l)][w] &&
                query_answer(q, space[w]).is_bot())
                return false;
        return true;
    }

    // The chosen query is the one the working level's normal form is
    // blocked on.  It properly extends the path at the working level by
    // construction (blocked means no item answers it), and its projection
    // to each level from the pivot up must be critical there: a defined
    // matching tuple embeds to a defined matching tuple at the working cap,
    // which answers the blocked query, and that answer survives the
    // embedding arithmetic.  Both facts are asserted, not assumed.
    ChosenQuery select(const Walk& walk, int pivot,
                       const PathEvalResult& blocked) const {
        const SQuery& q = blocked.query;
        ChosenQuery out;
        out.var = q.var;
        out.constant = q.is_constant();
        out.pivot = pivot;
        if (q.is_constant()) {
            out.constant_value = q.constant();
            for (int l = pivot; l <= top_; ++l) out.per_level.push_back(q);
        } else {
            out.witness = blocked.halted_at;
            for (int l = pivot; l <= top_; ++l)
                out.per_level.push_back({q.var, project_fun(q.graph(), l)});
        }
        for (int l = pivot; l <= top_; ++l) {
            const SQuery& ql = out.per_level[static_cast<size_t>(l - pivot)];
            if (!critical_at(walk, l, ql))
                throw ChainContractError(
                    "chosen query is not critical at level " + std::to_string(l) +
                    " (pivot " + std::to_string(pivot) + ")");
        }
        return out;
    }

    int n_;
    StrictSet strict_;
    int top_;
    std::vector<ProcPtr> normals_;
    std::vector<FunGraph> funs_;
    std::vector<FunGraph> stricts_;
    std::vector<std::vector<char>> defined_;
};

// Value of the chain's lub, strictified at the given positions, on one
// tuple.  Truncated chains certify bottom exactly; lazy chains raise their
// inspected ceiling instead and report fuel exhaustion when it runs out,
// since no finite stage can rule out a later value.
inline LubResult eval_lub(const Chain& c, StrictSet strict, const ArgTuple& v,
                          std::uint64_t fuel = kDefaultFuel, const LubObserver& obs = {}) {
    if (!c.is_lazy()) return LubEvaluator(c, strict).eval(v, fuel, obs);
    if (v.cap() > c.ceiling())
        throw std::invalid_argument("eval_lub: tuple cap beyond the chain ceiling");
    LubResult total;
    for (int level = v.cap();; ++level) {
        LubEvaluator ev(c.prefix(level), strict);
        const std::uint64_t left = fuel > total.fuel_used ? fuel - total.fuel_used : 0;
        LubResult r = ev.eval(v, left, obs);
        total.fuel_used += r.fuel_used;
        total.extensions += r.extensions;
        if (r.status == LubResult::Status::Value) {
            total.status = r.status;
            total.value = r.value;
            total.level = r.level;
            return total;
        }
        if (r.status == LubResult::Status::FuelExhausted) return total;
        // A bottom verdict only covers the levels inspected so far.
        if (level == c.ceiling() || total.fuel_used >= fuel) return total;
        ++total.fuel_used;  // ceiling raise
    }
}

// Step-3 selection as a standalone operation: the canonical critical query
// for the given path at the given pivotal level, with its payloads for all
// levels up to the ceiling.  A failure of the underlying nonemptiness
// claims raises ChainContractError.
inline ChosenQuery choose_query(const Path& theta, const Chain& c, StrictSet strict,
                                int pivot, int ceiling) {
    if (ceiling < 0 || ceiling > c.top())
        throw std::invalid_argument("choose_query: ceiling out of range");
    LubEvaluator ev(c.is_lazy() || ceiling < c.top() ? c.prefix(ceiling) : c, strict);
    return ev.choose(theta, pivot);
}

// ---------------------------------------------------------------------------
// Synthesis

// The decision tree the synthesizer walks: inner nodes hold the chosen
// query and its witness term, edges are the possible numeric answers.
// Labels are functions of the path from the root alone; no input tuple is
// ever consulted.
struct PathTree {
    struct Node {
        bool output = false;
        NatBot value;                  // leaves
        SQuery query;                  // inner nodes: payload at the working cap
        ProcPtr witness;               // term the emitted case queries with
        std::map<int, int> children;   // answer -> node index
    };
    int arity = 1;
    int top = 0;
    StrictSet strict;
    std::vector<Node> nodes;  // node 0 is the root
};

struct SynthResult {
    ProcPtr proc;
    PathTree tree;
};

namespace detail {

inline ProcPtr synth_impl(const Chain& chain, StrictSet strict, int top,
                          std::uint64_t budget, std::uint64_t& used, PathTree* tree);

// One tree node: probes the walk; a resolved or bottom round makes a leaf,
// otherwise the chosen query becomes a case whose witness is synthesized
// recursively on the derived chain and whose branches come from forked
// walks, one per answer the extended path still matches.
inline ProcPtr synth_node(const LubEvaluator& ev, LubEvaluator::Walk& walk, int arity,
                          int top, std::uint64_t budget, std::uint64_t& used,
                          PathTree* tree, int* node_out) {
    int node = -1;
    if (tree) {
        tree->nodes.emplace_back();
        node = static_cast<int>(tree->nodes.size()) - 1;
    }
    if (node_out) *node_out = node;
    LubEvaluator::Probe p = walk.probe(budget, used);
    if (p.kind == LubEvaluator::Probe::Kind::Exhausted)
        throw std::runtime_error("synth_proc: step budget exceeded");
    if (p.kind == LubEvaluator::Probe::Kind::Value ||
        p.kind == LubEvaluator::Probe::Kind::Bottom) {
        NatBot v = p.kind == LubEvaluator::Probe::Kind::Value ? p.value : NatBot::bot();
        if (tree) {
            auto& nd = tree->nodes[static_cast<size_t>(node)];
            nd.output = true;
            nd.value = v;
        }
        return Proc::constant(v);
    }
    const ChosenQuery& ch = p.chosen;
    ProcPtr witness = ch.constant
                          ? Proc::constant(ch.constant_value)
                          : synth_impl(projection_chain(ch.witness, arity, top),
                                       ev.strict().with(ch.var), top, budget, used, nullptr);
    const SQuery& q_top = ch.per_level.back();
    BranchList branches;
    for (int b = 0; b <= top; ++b) {
        LubEvaluator::Walk next = walk;
        next.extend(q_top, b);
        if (next.live[static_cast<size_t>(top)].empty()) continue;  // answer matches nothing
        int child = -1;
        ProcPtr body = synth_node(ev, next, arity, top, budget, used, tree, &child);
        if (tree) tree->nodes[static_cast<size_t>(node)].children[b] = child;
        if (body->is_const() && body->value().is_bot()) continue;  // bottom: leave absent
        branches.emplace_back(b, std::move(body));
    }
    if (tree) {
        auto& nd = tree->nodes[static_cast<size_t>(node)];
        nd.query = q_top;
        nd.witness = witness;
    }
    return Proc::make_case(ch.var, std::move(witness), std::move(branches));
}

inline ProcPtr synth_impl(const Chain& chain, StrictSet strict, int top,
                          std::uint64_t budget, std::uint64_t& used, PathTree* tree) {
    LubEvaluator ev(chain, strict);
    LubEvaluator::Walk walk(ev);
    return synth_node(ev, walk, chain.arity(), top, budget, used, tree, nullptr);
}

}  // namespace detail

// Builds the full decision tree for a truncated chain read up to level K
// and translates it into one term: inner nodes become cases on their
// chosen query, answer edges become branches, bottom leaves stay absent.
// The result denotes the strictified lub of the inspected levels.
inline SynthResult synth_tree(const Chain& c, StrictSet strict, int K,
                              std::uint64_t budget = std::uint64_t{1} << 22) {
    if (c.is_lazy()) throw std::invalid_argument("synth_proc: chain must be truncated");
    if (K < 0 || K > c.top()) throw std::invalid_argument("synth_proc: level out of range");
    SynthResult out;
    out.tree.arity = c.arity();
    out.tree.top = K;
    out.tree.strict = strict;
    std::uint64_t used = 0;
    out.proc = detail::synth_impl(K == c.top() ? c : c.prefix(K), strict, K, budget, used,
                                  &out.tree);
    return out;
}

inline ProcPtr synth_proc(const Chain& c, StrictSet strict, int K) {
    return synth_tree(c, strict, K).proc;
}

// ---------------------------------------------------------------------------
// The jump demo: a decidable bounded stand-in for a chain whose limit
// value genuinely needs deeper levels for deeper inputs.

// Level k answers 0 when the oracle's value at 0 is an even number up to k,
// or an odd number up to k whose companion value at 1 is also up to k.
inline ProcPtr jump_demo_proc(int k) {
    BranchList inner;
    for (int b = 0; b <= k; ++b) inner.emplace_back(b, Proc::constant(0));
    BranchList outer;
    for (int a = 0; a <= k; ++a)
        outer.emplace_back(a, a % 2 == 0
                                  ? Proc::constant(0)
                                  : Proc::make_case(1, Proc::constant(1), inner));
    return Proc::make_case(1, Proc::constant(0), std::move(outer));
}

inline Chain jump_demo_chain(int ceiling = 5) {
    return Chain::lazy(1, jump_demo_proc, ceiling);
}

// Fixed inputs exercising both outcomes: resolved values at various levels
// and honest fuel exhaustion where the limit stays undefined.  Caps are
// chosen so the ceiling-raising loop actually runs.
struct JumpPanelEntry {
    std::string label;
    MonoFn oracle;
};

inline std::vector<JumpPanelEntry> jump_demo_panel() {
    std::vector<JumpPanelEntry> out;
    out.push_back({"f constant 2", MonoFn::constant(2, 2)});
    out.push_back({"f(0)=0, strict", MonoFn(0, NatBot::bot(), {NatBot::of(0)})});
    out.push_back({"f(0)=1, f(1)=5",
                   MonoFn(5, NatBot::bot(),
                          {NatBot::of(1), NatBot::of(5), NatBot::bot(), NatBot::bot(),
                           NatBot::bot(), NatBot::bot()})});
    out.push_back({"f(0)=bot, f(1)=0",
                   MonoFn(2, NatBot::bot(), {NatBot::bot(), NatBot::of(0), NatBot::bot()})});
    out.push_back({"f(0)=3, f(1)=bot",
                   MonoFn(3, NatBot::bot(),
                          {NatBot::of(3), NatBot::bot(), NatBot::bot(), NatBot::bot()})});
    return out;
}

// ---------------------------------------------------------------------------
// Text form: a header line, then one level term per line.

inline std::string chain_text(const Chain& c) {
    if (c.is_lazy())
        throw std::invalid_argument("chain_text: lazy chains have no text form");
    std::ostringstream os;
    os << "chain n=" << c.arity() << " mode=truncated K=" << c.top() << "\n";
    for (int l = 0; l <= c.top(); ++l) os << pretty(c.level(l)) << "\n";
    return os.str();
}

inline Chain parse_chain(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&](bool required) -> bool {
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        if (required) throw ParseError("chain: unexpected end of input", lineno + 1, 1);
        return false;
    };
    next_line(true);
    int n = -1, cap = -1;
    std::string mode;
    {
        std::istringstream hs(line);
        std::string word;
        if (!(hs >> word) || word != "chain")
            throw ParseError("chain: header must start with 'chain'", lineno, 1);
        while (hs >> word) {
            const auto eq = word.find('=');
            if (eq == std::string::npos)
                throw ParseError("chain: malformed header field '" + word + "'", lineno, 1);
            const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
            if (key == "n")
                n = std::stoi(val);
            else if (key == "mode")
                mode = val;
            else if (key == "K")
                cap = std::stoi(val);
            else
                throw ParseError("chain: unknown header field '" + key + "'", lineno, 1);
        }
    }
    if (n < 1) throw ParseError("chain: header needs n>=1", lineno, 1);
    if (mode != "truncated")
        throw ParseError("chain: only mode=truncated has a text form", lineno, 1);
    if (cap < 0) throw ParseError("chain: header needs K>=0", lineno, 1);
    std::vector<ProcPtr> levels;
    for (int l = 0; l <= cap; ++l) {
        next_line(true);
        ProcPtr p;
        try {
            p = parse_proc(line);
        } catch (const ParseError& e) {
            throw ParseError("chain level " + std::to_string(l) + ": " + e.what(), lineno,
                             e.col());
        }
        if (max_var(p) > n)
            throw ParseError("chain level " + std::to_string(l) + " uses a missing position",
                             lineno, 1);
        levels.push_back(std::move(p));
    }
    if (next_line(false))
        throw ParseError("chain: trailing content after the last level", lineno, 1);
    return Chain::truncated(n, std::move(levels));
}

}  // namespace seqproc
