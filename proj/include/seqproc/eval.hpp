#pragma once

// Evaluation of procedure terms against a tuple of oracles, plus the two
// structural transforms the rest of the library leans on: numeral
// projection and the left-depth bound.

#include <seqproc/flat.hpp>
#include <seqproc/proc.hpp>

#include <string>
#include <vector>

namespace seqproc {

// eval(p, v): a constant is its own value.  A case evaluates its query to
// c (always, even when the result is discarded), asks oracle x_i for
// b = v_i(c), and continues in branch b when b is a number with a branch
// present; otherwise the result is bot.  Oracles answer above their cap
// with their bot value, so evaluation is insensitive to embedding the
// tuple into a larger cap.
inline NatBot eval(const ProcPtr& p, const ArgTuple& v) {
    if (p->is_const()) return p->value();
    NatBot c = eval(p->query(), v);
    NatBot b = v.at(p->var()).apply(c);
    if (b.is_bot()) return NatBot::bot();
    const ProcPtr* body = p->branch(b.num());
    if (!body) return NatBot::bot();
    return eval(*body, v);
}

// ---------------------------------------------------------------------------
// Traced evaluation: the chronological list of oracle interactions, and
// why the run produced bot when it did.

enum class EvalStop {
    Value,          // reached a numeric constant
    BotLeaf,        // reached a literal bot constant
    BotAnswer,      // an oracle answered bot
    MissingBranch,  // an oracle answered a number with no branch for it
};

struct EvalStep {
    int var;             // oracle asked
    NatBot query_value;  // value the query evaluated to
    NatBot answer;       // oracle's reply
    int taken = -1;      // branch label entered, or -1 if the run stopped here
};

struct EvalTrace {
    NatBot value;
    EvalStop stop = EvalStop::Value;
    std::vector<EvalStep> steps;
};

inline NatBot eval_trace_into(const ProcPtr& p, const ArgTuple& v, EvalTrace& out) {
    if (p->is_const()) {
        out.stop = p->value().is_bot() ? EvalStop::BotLeaf : EvalStop::Value;
        return out.value = p->value();
    }
    NatBot c = eval_trace_into(p->query(), v, out);
    NatBot b = v.at(p->var()).apply(c);
    if (b.is_bot()) {
        out.steps.push_back({p->var(), c, b, -1});
        out.stop = EvalStop::BotAnswer;
        return out.value = NatBot::bot();
    }
    const ProcPtr* body = p->branch(b.num());
    if (!body) {
        out.steps.push_back({p->var(), c, b, -1});
        out.stop = EvalStop::MissingBranch;
        return out.value = NatBot::bot();
    }
    out.steps.push_back({p->var(), c, b, b.num()});
    return eval_trace_into(*body, v, out);
}

inline EvalTrace eval_trace(const ProcPtr& p, const ArgTuple& v) {
    EvalTrace out;
    eval_trace_into(p, v, out);
    return out;
}

inline std::string to_string(EvalStop s) {
    switch (s) {
        case EvalStop::Value: return "value";
        case EvalStop::BotLeaf: return "bot-leaf";
        case EvalStop::BotAnswer: return "bot-answer";
        case EvalStop::MissingBranch: return "missing-branch";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// left_bound: the deepest nesting of case-valued queries.  Querying with a
// constant is free; querying with another case costs one level.  Terms
// normalized with respect to a strict set S stay within n - |S|.

inline int left_bound(const ProcPtr& p) {
    if (p->is_const()) return 0;
    int q = (p->query()->is_case() ? 1 : 0) + left_bound(p->query());
    for (const auto& [label, body] : p->branches()) q = std::max(q, left_bound(body));
    return q;
}

// ---------------------------------------------------------------------------
// project_proc: restrict a term to the numerals {0..k}.  Constants above k
// become bot; branches labelled above k are removed.  Against arguments at
// cap k this computes exactly the k-truncation of the original term's
// behaviour.

inline ProcPtr project_proc(const ProcPtr& p, int k) {
    if (p->is_const())
        return p->value().is_num() && p->value().num() > k ? Proc::bottom() : p;
    BranchList kept;
    for (const auto& [label, body] : p->branches())
        if (label <= k) kept.emplace_back(label, project_proc(body, k));
    return Proc::make_case(p->var(), project_proc(p->query(), k), std::move(kept));
}

}  // namespace seqproc
