// seqproc: command-line frontend over the header library.  Every verb is a
// deterministic function of its input files, flags, and --seed; identical
// invocations produce byte-identical reports.
//
// Exit codes: 0 success, 1 domain error (bad shapes, violated contracts,
// failed checks), 2 usage error (bad flags, unreadable or malformed input).

#include <CLI11.hpp>

#include <seqproc/chain.hpp>
#include <seqproc/rng.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace sp = seqproc;

namespace {

// Thrown for malformed command-line values the flag parser cannot see
// into, e.g. a bad strict-set or oracle literal.  Mapped to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Strict sets are written {1,3} (or bare 1,3; {} or an empty string for
// the empty set).
sp::StrictSet parse_strict(const std::string& text, int arity) {
    std::string body = text;
    if (!body.empty() && body.front() == '{') {
        if (body.back() != '}') throw UsageError("strict set: unbalanced braces");
        body = body.substr(1, body.size() - 2);
    }
    sp::StrictSet s = sp::StrictSet::empty();
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto from = item.find_first_not_of(" \t");
        if (from == std::string::npos) continue;
        const auto to = item.find_last_not_of(" \t");
        int i;
        try {
            i = std::stoi(item.substr(from, to - from + 1));
        } catch (const std::exception&) {
            throw UsageError("strict set: bad position '" + item + "'");
        }
        if (i < 1 || i > arity)
            throw UsageError("strict set: position " + std::to_string(i) +
                             " out of range for arity " + std::to_string(arity));
        s = s.with(i);
    }
    return s;
}

// Inline oracle list: whitespace-separated groups `f:(bot=V;0=V,...)`, or
// `f2:(...)` to address a position explicitly.  Unlisted points default to
// the value at bot; the common cap is the largest number mentioned
// anywhere, widened by cap_hint.
sp::ArgTuple parse_args_inline(const std::string& text, int arity, int cap_hint) {
    std::vector<std::pair<int, std::string>> groups;  // position, body text
    int next_pos = 1;
    size_t p = 0;
    while (p < text.size()) {
        while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
        if (p >= text.size()) break;
        if (text[p] != 'f') throw UsageError("oracle list: expected 'f' at '" +
                                             text.substr(p) + "'");
        ++p;
        int pos = -1;
        size_t d = p;
        while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
        if (d > p) pos = std::stoi(text.substr(p, d - p));
        p = d;
        if (p >= text.size() || text[p] != ':')
            throw UsageError("oracle list: expected ':' after position name");
        ++p;
        const size_t open = p;
        if (open >= text.size() || text[open] != '(')
            throw UsageError("oracle list: expected '(' after ':'");
        int depth = 0;
        while (p < text.size()) {
            if (text[p] == '(') ++depth;
            if (text[p] == ')' && --depth == 0) break;
            ++p;
        }
        if (depth != 0) throw UsageError("oracle list: unbalanced parentheses");
        ++p;
        groups.emplace_back(pos < 0 ? next_pos : pos, text.substr(open, p - open));
        next_pos = groups.back().first + 1;
    }
    if (static_cast<int>(groups.size()) != arity)
        throw UsageError("oracle list: got " + std::to_string(groups.size()) +
                         " oracles for arity " + std::to_string(arity));
    // First pass infers the widest cap any group needs; the second parses
    // them all at that common cap.
    int cap = std::max(cap_hint, 0);
    for (auto& [pos, body] : groups) {
        size_t q = 0;
        cap = std::max(cap, sp::detail::parse_monofn_body(body, q, -1).cap());
    }
    std::vector<sp::MonoFn> fns(static_cast<size_t>(arity), sp::MonoFn::constant(cap, 0));
    std::vector<bool> seen(static_cast<size_t>(arity) + 1, false);
    for (auto& [pos, body] : groups) {
        if (pos < 1 || pos > arity)
            throw UsageError("oracle list: position f" + std::to_string(pos) +
                             " out of range for arity " + std::to_string(arity));
        if (seen[static_cast<size_t>(pos)])
            throw UsageError("oracle list: position f" + std::to_string(pos) +
                             " given twice");
        seen[static_cast<size_t>(pos)] = true;
        size_t q = 0;
        fns[static_cast<size_t>(pos) - 1] = sp::detail::parse_monofn_body(body, q, cap);
    }
    return sp::ArgTuple(std::move(fns));
}

std::string source_line(int arity, const std::optional<int>& cap, const sp::ProcPtr& p) {
    std::string s = "n=" + std::to_string(arity);
    if (cap) s += ",k=" + std::to_string(*cap);
    return s + "; " + sp::pretty(p);
}

// Input files for graph-valued verbs may hold either a graph table or a
// procedure source; a procedure is denoted at its header cap unless --cap
// overrides it.
sp::FunGraph load_graph(const std::string& path, int cap_flag) {
    const std::string text = read_file(path);
    const size_t start = text.find_first_not_of(" \t\r\n#");
    if (start != std::string::npos && text.compare(start, 5, "graph") == 0)
        return sp::parse_graph(text);
    sp::ProcSource src = sp::parse_proc_source(text);
    int cap = cap_flag >= 0 ? cap_flag : src.cap.value_or(-1);
    if (cap < 0)
        throw UsageError(path + ": needs k in its header or --cap to fix the graph cap");
    return sp::denote(src.proc, src.arity, cap);
}

std::string lub_report(const sp::LubResult& r) {
    std::ostringstream os;
    os << "status=" << sp::to_string(r.status);
    if (r.status == sp::LubResult::Status::Value)
        os << " value=" << sp::to_string(r.value) << " level=" << r.level;
    if (r.status == sp::LubResult::Status::Bottom) os << " level=" << r.level;
    os << " fuel=" << r.fuel_used << " extensions=" << r.extensions;
    return os.str();
}

// ---------------------------------------------------------------------------
// Verb bodies.  Each returns the process exit code.

int cmd_parse(const std::string& file) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    std::cout << source_line(src.arity, src.cap, src.proc) << "\n";
    return 0;
}

int cmd_eval(const std::string& file, const std::string& args, bool trace) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    sp::ArgTuple v = parse_args_inline(args, src.arity, src.cap.value_or(-1));
    if (!trace) {
        std::cout << sp::to_string(sp::eval(src.proc, v)) << "\n";
        return 0;
    }
    sp::EvalTrace t = sp::eval_trace(src.proc, v);
    for (const sp::EvalStep& st : t.steps) {
        std::cout << "ask x" << st.var << " at " << sp::to_string(st.query_value)
                  << " -> " << sp::to_string(st.answer);
        if (st.taken >= 0) std::cout << ", branch " << st.taken;
        std::cout << "\n";
    }
    std::cout << "stop: " << sp::to_string(t.stop) << "\n";
    std::cout << sp::to_string(t.value) << "\n";
    return 0;
}

int cmd_denote(const std::string& file, int cap_flag) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    int cap = cap_flag >= 0 ? cap_flag : src.cap.value_or(-1);
    if (cap < 0) throw UsageError("denote: needs k in the header or --cap");
    std::cout << sp::to_string(sp::denote(src.proc, src.arity, cap));
    return 0;
}

int cmd_snf(const std::string& file, const std::string& strict, bool trace) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    sp::StrictSet s = parse_strict(strict, src.arity);
    sp::RewriteObserver obs;
    if (trace)
        obs = [](const sp::RewriteEvent& e) {
            std::cout << "rewrite " << sp::to_string(e.kind) << ": measure "
                      << e.measure_before << " -> " << e.measure_after << "\n";
        };
    sp::ProcPtr normal = sp::snormalize(src.proc, s, obs);
    std::cout << source_line(src.arity, src.cap, normal) << "\n";
    return 0;
}

int cmd_project(const std::string& file, int cap) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    std::cout << source_line(src.arity, cap, sp::project_proc(src.proc, cap)) << "\n";
    return 0;
}

int cmd_leftbound(const std::string& file) {
    sp::ProcSource src = sp::parse_proc_source(read_file(file));
    std::cout << sp::left_bound(src.proc) << "\n";
    return 0;
}

int cmd_enumerate(int arity, int cap, int max_size, bool print) {
    sp::ProcEnumerator en(arity, cap);
    if (print) {
        en.for_each(max_size,
                    [](const sp::ProcPtr& p) { std::cout << sp::pretty(p) << "\n"; });
        return 0;
    }
    std::cout << "terms of arity " << arity << " at cap " << cap << "\n";
    for (int s = 0; s <= max_size; ++s)
        std::cout << "size " << s << ": " << en.count_exact(s) << "\n";
    std::cout << "total up to size " << max_size << ": " << en.count_upto(max_size)
              << "\n";
    return 0;
}

int cmd_check_seq(const std::string& file, int cap_flag) {
    sp::FunGraph g = load_graph(file, cap_flag);
    sp::SeqCatalog cat = sp::enumerate_sequentials(g.arity(), g.cap());
    std::cout << "catalog n=" << cat.arity << " k=" << cat.cap << ": " << cat.size()
              << " members, " << (cat.complete ? "complete" : "incomplete") << "\n";
    sp::SeqDecision d = sp::is_sequential(g, cat);
    switch (d.status) {
        case sp::SeqDecision::Status::Yes:
            std::cout << "sequential: yes\nwitness: " << sp::pretty(d.witness) << "\n";
            break;
        case sp::SeqDecision::Status::No:
            std::cout << "sequential: no\n";
            break;
        case sp::SeqDecision::Status::Unknown:
            std::cout << "sequential: unknown (catalog incomplete)\n";
            break;
    }
    return 0;
}

int cmd_seq_lub(const std::string& file_a, const std::string& file_b, int cap_flag) {
    sp::FunGraph a = load_graph(file_a, cap_flag);
    sp::FunGraph b = load_graph(file_b, cap_flag);
    sp::SeqCatalog cat = sp::enumerate_sequentials(a.arity(), a.cap());
    std::cout << "catalog n=" << cat.arity << " k=" << cat.cap << ": " << cat.size()
              << " members, " << (cat.complete ? "complete" : "incomplete") << "\n";
    sp::LubOutcome out = sp::seq_lub(a, b, cat);
    switch (out.status) {
        case sp::LubOutcome::Status::Value:
            std::cout << "least upper bound: " << sp::pretty(out.least->witness) << "\n"
                      << sp::to_string(out.least->graph);
            break;
        case sp::LubOutcome::Status::None:
            std::cout << "least upper bound: none (no common upper bound)\n";
            break;
        case sp::LubOutcome::Status::NoLeast:
            std::cout << "least upper bound: none (" << out.minimal.size()
                      << " minimal upper bounds)\n";
            break;
    }
    return 0;
}

int cmd_chain_check(const std::string& file, int level) {
    sp::Chain c = sp::parse_chain(read_file(file));
    const int hi = level >= 0 ? level : c.top();
    sp::ChainReport rep = sp::chain_check(c, hi);
    if (rep.ok) {
        std::cout << "chain n=" << c.arity() << " K=" << c.top() << ": ok (levels 0.."
                  << std::min(hi, c.top()) << ")\n";
        return 0;
    }
    std::cout << "chain n=" << c.arity() << " K=" << c.top() << ": "
              << rep.violations.size() << " violation(s)\n";
    for (const sp::ChainViolation& v : rep.violations)
        std::cout << "  level " << v.level << ": " << v.what << "\n";
    return 1;
}

// Lazy chains are selected by generator name; truncated ones come from a
// chain file.
sp::Chain make_chain(const std::string& chain_file, const std::string& gen, int ceiling) {
    if (!chain_file.empty()) return sp::parse_chain(read_file(chain_file));
    if (gen == "jump-demo") return sp::jump_demo_chain(ceiling);
    const std::string prefix = "const:";
    if (gen.compare(0, prefix.size(), prefix) == 0) {
        sp::ProcSource src = sp::parse_proc_source(read_file(gen.substr(prefix.size())));
        return sp::constant_chain(src.proc, src.arity, ceiling);
    }
    throw UsageError("unknown generator '" + gen + "' (try jump-demo or const:<file>)");
}

int cmd_eval_lub(const std::string& chain_file, const std::string& gen, int ceiling,
                 const std::string& strict, const std::string& args,
                 std::uint64_t fuel) {
    sp::Chain c = make_chain(chain_file, gen, ceiling);
    sp::StrictSet s = parse_strict(strict, c.arity());
    sp::ArgTuple v = parse_args_inline(args, c.arity(), 0);
    if (v.cap() > c.top()) throw UsageError("oracle cap exceeds the chain's levels");
    std::cout << lub_report(sp::eval_lub(c, s, v, fuel)) << "\n";
    return 0;
}

int cmd_synth(const std::string& file, const std::string& strict, int level) {
    sp::Chain c = sp::parse_chain(read_file(file));
    sp::StrictSet s = parse_strict(strict, c.arity());
    const int K = level >= 0 ? level : c.top();
    sp::ProcPtr p = sp::synth_proc(c, s, K);
    std::cout << "n=" << c.arity() << ",k=" << K << "; " << sp::pretty(p) << "\n";
    std::cout << "left bound: " << sp::left_bound(p) << "\n";
    return 0;
}

int cmd_demo_lub_gap() {
    sp::ProcPtr f_term = sp::parse_proc("case x1(0){0 => 0}");
    sp::ProcPtr g_term = sp::parse_proc("case x1(1){0 => 0}");
    sp::FunGraph f = sp::denote(f_term, 1, 1);
    sp::FunGraph g = sp::denote(g_term, 1, 1);
    std::cout << "F = " << sp::pretty(f_term) << "\nG = " << sp::pretty(g_term) << "\n";
    sp::SeqCatalog cat = sp::enumerate_sequentials(1, 1);
    std::cout << "catalog n=1 k=1: " << cat.size() << " members, "
              << (cat.complete ? "complete" : "incomplete") << "\n";
    std::optional<sp::FunGraph> h = sp::graph_lub(f, g);
    if (!h) {
        std::cout << "F and G have no pointwise upper bound\n";
        return 1;
    }
    sp::SeqDecision d = sp::is_sequential(*h, cat);
    std::cout << "H = pointwise lub of F and G\n"
              << "H sequential: "
              << (d.status == sp::SeqDecision::Status::Yes ? "YES" : "NO") << "\n";
    sp::LubOutcome lub = sp::seq_lub(f, g, cat);
    if (lub.status != sp::LubOutcome::Status::Value) {
        std::cout << "no least sequential upper bound\n";
        return 1;
    }
    std::cout << "least sequential upper bound F|_|G = " << sp::pretty(lub.least->witness)
              << "\n";
    return 0;
}

int cmd_demo_jump(std::uint64_t fuel) {
    sp::Chain c = sp::jump_demo_chain();
    std::cout << "jump chain, ceiling " << c.ceiling() << ", strict set {}\n";
    for (const sp::JumpPanelEntry& e : sp::jump_demo_panel()) {
        sp::LubResult r = sp::eval_lub(c, sp::StrictSet::empty(), sp::ArgTuple({e.oracle}),
                                       fuel);
        std::printf("%-18s -> %s\n", e.label.c_str(), lub_report(r).c_str());
    }
    return 0;
}

// The interaction record of one concrete run: every query the term asked,
// with the oracle's answer, up to the first bot reply.
sp::Path record_path(const sp::ProcPtr& p, const sp::ArgTuple& v, sp::StrictSet s) {
    sp::Path path{v.arity(), v.cap(), s, {}};
    sp::ProcPtr cur = p;
    while (cur->is_case()) {
        sp::SQuery q;
        q.var = cur->var();
        if (s.contains(q.var))
            q.payload = cur->query()->value().num();
        else
            q.payload = sp::strictify_graph(sp::denote(cur->query(), v.arity(), v.cap()),
                                            s.with(q.var));
        sp::NatBot ans = sp::query_answer(q, v);
        if (ans.is_bot()) break;
        path.items.push_back({q, ans.num()});
        const sp::ProcPtr* body = cur->branch(ans.num());
        if (!body) break;
        cur = *body;
    }
    return path;
}

// Searches pairs of equivalent S-normal procedures and shared paths for a
// termination disagreement: evaluation on a path "terminates" when it
// yields a numeric value (a value on a path binds every matching input;
// reaching bot or staying blocked binds nothing).  Whether two equivalent
// normal forms can disagree this way on one path is open either way, so
// the verb only reports what it finds and asserts nothing.  When both
// sides terminate their values are compared as a sanity tally; those can
// never differ.
int cmd_paths_experiment(int trials, int arity, int cap, std::uint64_t seed) {
    sp::Rng rng(seed);
    std::map<std::vector<int>, std::vector<sp::ProcPtr>> buckets;
    long long pairs = 0, paths = 0, disagreements = 0, both = 0, mismatches = 0;
    const auto& space = sp::tuple_space(arity, cap);
    for (int t = 0; t < trials; ++t) {
        sp::StrictSet s = sp::all_strict_sets(
            arity)[sp::rng_below(rng, sp::all_strict_sets(arity).size())];
        sp::ProcPtr p = sp::snormalize(sp::random_proc(rng, arity, cap, 3), s);
        sp::FunGraph den = sp::denote(p, arity, cap);
        // Bucket by strict set and denotation; two members of one bucket
        // are equivalent S-normal forms.
        std::vector<int> key = sp::graph_key(den);
        key.push_back(static_cast<int>(s.mask()));
        auto& bucket = buckets[key];
        for (const sp::ProcPtr& q : bucket) {
            if (sp::proc_equal(p, q)) continue;
            ++pairs;
            // Drive both terms along paths recorded from concrete runs of
            // either one, plus truncations, so both orders of blocking get
            // a chance to show.
            for (int probe = 0; probe < 4; ++probe) {
                const sp::ArgTuple& v = space[sp::rng_below(rng, space.size())];
                for (const sp::ProcPtr& lead : {p, q}) {
                    sp::Path theta = record_path(lead, v, s);
                    if (!theta.items.empty() && sp::rng_coin(rng))
                        theta.items.pop_back();
                    ++paths;
                    sp::PathEvalResult rp = sp::eval_on_path(p, theta);
                    sp::PathEvalResult rq = sp::eval_on_path(q, theta);
                    const bool term_p = rp.stop == sp::PathEvalResult::Stop::Value;
                    const bool term_q = rq.stop == sp::PathEvalResult::Stop::Value;
                    if (term_p && term_q) {
                        ++both;
                        if (rp.value != rq.value) ++mismatches;
                        continue;
                    }
                    if (term_p == term_q) continue;
                    ++disagreements;
                    if (disagreements <= 3) {
                        std::cout << "disagreement on strict set " << s.to_string()
                                  << ":\n  P = " << sp::pretty(p)
                                  << "\n  Q = " << sp::pretty(q) << "\n  path:\n"
                                  << sp::to_string(theta)
                                  << "  P: " << sp::to_string(rp.stop)
                                  << ", Q: " << sp::to_string(rq.stop) << "\n";
                    }
                }
            }
        }
        bucket.push_back(p);
    }
    std::cout << "pairs=" << pairs << " paths=" << paths
              << " both-terminated=" << both << " value-mismatches=" << mismatches
              << " termination-disagreements=" << disagreements << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "seqproc: finite sequential procedures, their functionals, and chain lubs"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t fuel = sp::kDefaultFuel;
    std::uint64_t seed = 0;
    app.add_option("--fuel", fuel, "step budget for chain evaluation")
        ->default_val(sp::kDefaultFuel);
    app.add_option("--seed", seed, "seed for randomized verbs")->default_val(0);

    std::string file, file_b, args_text, strict_text = "{}", gen;
    int cap = -1, level = -1, arity = 1, max_size = 2, trials = 200, ceiling = 5;
    bool trace = false, print_terms = false;

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse a procedure and re-print it");
    parse_cmd->add_option("file", file)->required();

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a procedure on oracles");
    eval_cmd->add_option("file", file)->required();
    eval_cmd->add_option("--args", args_text, "oracles, e.g. \"f:(bot=3;0=3,1=3)\"")
        ->required();
    eval_cmd->add_flag("--trace", trace, "print every oracle interaction");

    CLI::App* denote_cmd = app.add_subcommand("denote", "print a procedure's graph");
    denote_cmd->add_option("file", file)->required();
    denote_cmd->add_option("--cap", cap, "value cap (defaults to the header's k)");

    CLI::App* snf_cmd = app.add_subcommand("snf", "print the S-normal form");
    snf_cmd->add_option("file", file)->required();
    snf_cmd->add_option("--strict", strict_text, "strict positions, e.g. {1,2}");
    snf_cmd->add_flag("--trace", trace, "print the rewrite trace");

    CLI::App* project_cmd = app.add_subcommand("project", "project numerals to a cap");
    project_cmd->add_option("file", file)->required();
    project_cmd->add_option("--cap", cap, "target cap")->required();

    CLI::App* lb_cmd = app.add_subcommand("leftbound", "print the left bound");
    lb_cmd->add_option("file", file)->required();

    CLI::App* enum_cmd = app.add_subcommand("enumerate", "count or list terms by size");
    enum_cmd->add_option("--arity", arity)->required();
    enum_cmd->add_option("--cap", cap)->required();
    enum_cmd->add_option("--max-size", max_size, "largest case-node count");
    enum_cmd->add_flag("--print", print_terms, "list the terms instead of counting");

    CLI::App* seq_cmd = app.add_subcommand("check-seq", "decide sequentiality of a graph");
    seq_cmd->add_option("file", file, "graph file or procedure source")->required();
    seq_cmd->add_option("--cap", cap, "cap for procedure inputs");

    CLI::App* lub_cmd = app.add_subcommand("seq-lub", "least sequential upper bound");
    lub_cmd->add_option("file_a", file)->required();
    lub_cmd->add_option("file_b", file_b)->required();
    lub_cmd->add_option("--cap", cap, "cap for procedure inputs");

    CLI::App* chain_cmd = app.add_subcommand("chain-check", "verify a chain's contract");
    chain_cmd->add_option("file", file)->required();
    chain_cmd->add_option("--level", level, "highest level to inspect");

    CLI::App* elub_cmd = app.add_subcommand("eval-lub", "evaluate a chain's lub");
    elub_cmd->add_option("file", file, "chain file (omit when using --gen)");
    elub_cmd->add_option("--gen", gen, "built-in generator: jump-demo or const:<file>");
    elub_cmd->add_option("--ceiling", ceiling, "ceiling for generated chains");
    elub_cmd->add_option("--strict", strict_text, "strict positions");
    elub_cmd->add_option("--args", args_text, "oracles")->required();

    CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize the lub procedure");
    synth_cmd->add_option("file", file)->required();
    synth_cmd->add_option("--strict", strict_text, "strict positions");
    synth_cmd->add_option("--level", level, "read the chain up to this level");

    CLI::App* demo_cmd = app.add_subcommand("demo", "run a named scenario");
    std::string demo_name;
    demo_cmd->add_option("name", demo_name, "lub-gap or jump-demo")->required();

    CLI::App* exp_cmd =
        app.add_subcommand("paths-experiment", "search for termination disagreements");
    exp_cmd->add_option("--trials", trials, "terms to draw");
    exp_cmd->add_option("--arity", arity);
    exp_cmd->add_option("--cap", cap, "value cap (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(file);
        if (eval_cmd->parsed()) return cmd_eval(file, args_text, trace);
        if (denote_cmd->parsed()) return cmd_denote(file, cap);
        if (snf_cmd->parsed()) return cmd_snf(file, strict_text, trace);
        if (project_cmd->parsed()) return cmd_project(file, cap);
        if (lb_cmd->parsed()) return cmd_leftbound(file);
        if (enum_cmd->parsed()) return cmd_enumerate(arity, cap, max_size, print_terms);
        if (seq_cmd->parsed()) return cmd_check_seq(file, cap);
        if (lub_cmd->parsed()) return cmd_seq_lub(file, file_b, cap);
        if (chain_cmd->parsed()) return cmd_chain_check(file, level);
        if (elub_cmd->parsed())
            return cmd_eval_lub(file, gen, ceiling, strict_text, args_text, fuel);
        if (synth_cmd->parsed()) return cmd_synth(file, strict_text, level);
        if (demo_cmd->parsed()) {
            if (demo_name == "lub-gap") return cmd_demo_lub_gap();
            if (demo_name == "jump-demo") return cmd_demo_jump(fuel);
            throw UsageError("unknown demo '" + demo_name + "' (try lub-gap or jump-demo)");
        }
        if (exp_cmd->parsed())
            return cmd_paths_experiment(trials, arity, cap < 0 ? 1 : cap, seed);
        std::cerr << "error: no verb given\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
