#pragma once

// Normalization of terms relative to a set S of argument positions that
// may be assumed strict.  The normal form pushes every case on a strict
// position down to a constant query:
//
//   - a case on i not in S keeps its shape; its query is normalized with
//     i added to S (flatness makes the extra assumption harmless: an
//     oracle defined at bot is constant, so the outer application cannot
//     tell the difference), its branches with S unchanged;
//   - a case on i in S over a bot query dies: a strict oracle answers bot;
//   - a case on i in S over a case query rotates, pulling the inner case
//     outside and re-queuing the result.
//
// Rotation is the only rule that rearranges, and it strictly shrinks the
// weighted measure below, which pays double for query nesting; that gives
// termination even though rotation can duplicate branch bodies.

#include <seqproc/eval.hpp>
#include <seqproc/proc.hpp>

#include <functional>
#include <vector>

namespace seqproc {

// measure(const) = 0, measure(case) = 1 + 2*measure(query) + max over
// branch bodies.  Rotating "case i (case j ...) {...}" trades two levels
// of query weight for one level of branch weight, hence the factor 2.
inline int rewrite_measure(const ProcPtr& p) {
    if (p->is_const()) return 0;
    int branches = 0;
    for (const auto& [label, body] : p->branches())
        branches = std::max(branches, rewrite_measure(body));
    return 1 + 2 * rewrite_measure(p->query()) + branches;
}

struct RewriteEvent {
    enum class Kind {
        CollapseBotQuery,  // strict position queried with a bot constant
        Rotate,            // inner case pulled out of a strict query
    };
    Kind kind;
    std::vector<int> path;  // from the root: -1 descends into a query,
                            // a label descends into that branch
    int measure_before;
    int measure_after;
};

using RewriteObserver = std::function<void(const RewriteEvent&)>;

inline std::string to_string(RewriteEvent::Kind k) {
    return k == RewriteEvent::Kind::Rotate ? "rotate" : "collapse-bot-query";
}

namespace detail {

inline ProcPtr snf_rec(const ProcPtr& p, StrictSet s, std::vector<int>& path,
                       const RewriteObserver& obs) {
    if (p->is_const()) return p;
    const int i = p->var();

    if (!s.contains(i)) {
        path.push_back(-1);
        ProcPtr q = snf_rec(p->query(), s.with(i), path, obs);
        path.pop_back();
        BranchList brs;
        brs.reserve(p->branches().size());
        for (const auto& [label, body] : p->branches()) {
            path.push_back(label);
            brs.emplace_back(label, snf_rec(body, s, path, obs));
            path.pop_back();
        }
        return Proc::make_case(i, std::move(q), std::move(brs));
    }

    if (p->query()->is_const()) {
        if (p->query()->value().is_bot()) {
            if (obs) obs({RewriteEvent::Kind::CollapseBotQuery, path,
                          rewrite_measure(p), 0});
            return Proc::bottom();
        }
        BranchList brs;
        brs.reserve(p->branches().size());
        for (const auto& [label, body] : p->branches()) {
            path.push_back(label);
            brs.emplace_back(label, snf_rec(body, s, path, obs));
            path.pop_back();
        }
        return Proc::make_case(i, p->query(), std::move(brs));
    }

    // Rotate: P = case xi(case xj(R){b => Q_b}){a => P_a} becomes
    // case xj(R){b => case xi(Q_b){a => P_a}}.  Answers the inner case
    // cannot produce stay absent; they led to a bot query and die either
    // way.
    const ProcPtr& inner = p->query();
    BranchList rotated;
    rotated.reserve(inner->branches().size());
    for (const auto& [b, q_b] : inner->branches())
        rotated.emplace_back(b, Proc::make_case(i, q_b, BranchList(p->branches())));
    ProcPtr hat = Proc::make_case(inner->var(), inner->query(), std::move(rotated));
    if (obs) obs({RewriteEvent::Kind::Rotate, path, rewrite_measure(p),
                  rewrite_measure(hat)});
    return snf_rec(hat, s, path, obs);
}

}  // namespace detail

inline ProcPtr snormalize(const ProcPtr& p, StrictSet s,
                          const RewriteObserver& obs = nullptr) {
    std::vector<int> path;
    return detail::snf_rec(p, s, path, obs);
}

inline bool is_snormal(const ProcPtr& p, StrictSet s) {
    return proc_equal(snormalize(p, s), p);
}

}  // namespace seqproc
