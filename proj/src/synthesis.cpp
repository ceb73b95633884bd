#include "ltsynth/synthesis.hpp"

#include <algorithm>
#include <functional>

#include "ltsynth/oracle.hpp"

namespace ltsynth {

namespace {

constexpr std::size_t kMaxBranches = 32;

// disjunctive normal form over closed subformulas; empty result means false
std::vector<std::vector<F>> sentence_dnf(const F& f) {
    switch (f->kind) {
    case Kind::True: return {{}};
    case Kind::False: return {};
    case Kind::Or: {
        std::vector<std::vector<F>> r;
        for (auto& k : f->kids) {
            auto d = sentence_dnf(k);
            r.insert(r.end(), d.begin(), d.end());
            if (r.size() > kMaxBranches) return {{f}};
        }
        return r;
    }
    case Kind::And: {
        std::vector<std::vector<F>> r{{}};
        for (auto& k : f->kids) {
            auto d = sentence_dnf(k);
            std::vector<std::vector<F>> next;
            for (auto& a : r)
                for (auto& b : d) {
                    auto c = a;
                    c.insert(c.end(), b.begin(), b.end());
                    next.push_back(std::move(c));
                }
            if (next.size() > kMaxBranches) return {{f}};
            r = std::move(next);
        }
        return r;
    }
    default: return {{f}};
    }
}

bool reserved(const std::string& label) {
    std::string b = label_base(label);
    return b == "#" || (!b.empty() && b[0] == '^');
}

Branch compile_branch(const F& body, const Document& work, const PredicateTable& table) {
    Branch b;
    b.formula = body;
    b.non_erasing = !has_surjectivity_conjunct(body);
    Document d = work;
    d.body = body;
    b.doc = b.non_erasing ? make_non_erasing(d, false) : d;
    b.snf = scott_normal_form(to_output_form(b.doc.body), b.doc.output_alphabet);
    McpInstance m = compile_mcp(b.snf, table);
    if (b.non_erasing) {
        // only the added positions and what their constraints reach are needed for existence
        std::vector<char> seeds;
        for (auto& l : m.labels) seeds.push_back(reserved(l));
        b.allowed = needed_labels(m, seeds);
    }
    b.ctx = std::make_shared<const Context>(std::move(m));
    return b;
}

std::vector<std::vector<int>> choices_for(const CompiledSpec& spec, const std::vector<std::string>& u) {
    std::vector<std::vector<int>> r;
    for (auto& s : u) {
        auto it = std::find(spec.sigma().begin(), spec.sigma().end(), s);
        if (it == spec.sigma().end()) throw Error(ErrorKind::Input, "letter '" + s + "' is not in the input alphabet");
        int base = int(it - spec.sigma().begin());
        std::vector<int> c;
        for (std::size_t a = 0; a < spec.base_symbol.size(); ++a)
            if (spec.base_symbol[a] == base) c.push_back(int(a));
        r.push_back(std::move(c));
    }
    if (r.empty()) throw Error(ErrorKind::Precondition, "empty input word");
    return r;
}

std::size_t remaining(const QueryOptions& opt, std::size_t used) { return used >= opt.budget ? 0 : opt.budget - used; }

// Searches with few new positions per column first; the last round has no bound,
// so a miss is final. Bounded rounds that run out of budget are skipped.
template <class Find>
std::optional<OGraph> leveled(const Branch& b, const QueryOptions& opt, std::size_t& used, Find find) {
    for (int cap : {1, 2, 0}) {
        std::size_t room = remaining(opt, used);
        if (cap) room = std::min(room, opt.budget / 8);
        ProfileSearch search(*b.ctx, SearchOptions{room, b.allowed, cap});
        try {
            auto g = find(search);
            used += search.stats().visited;
            if (g) return g;
        } catch (const BudgetExceeded&) {
            used += search.stats().visited;
            if (!cap) throw BudgetExceeded(used);
        }
    }
    return std::nullopt;
}

} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    default: return "INDETERMINATE";
    }
}

OGraph CompiledSpec::project(const OGraph& g) const {
    OGraph h;
    h.input = g.input;
    for (std::size_t i = 0; i < g.output.size(); ++i) {
        if (reserved(g.output[i])) continue;
        h.output.push_back(label_base(g.output[i]));
        h.origin.push_back(g.origin[i]);
    }
    return project_graph(h, reduced.input_base, reduced.output_base);
}

CompiledSpec compile(const Document& d, const PredicateTable& table) {
    check_sentence(d.body);
    CompiledSpec spec;
    spec.original = d;
    spec.table = table;
    spec.reduced = elt_reduce(d, table);
    const Document& work = spec.reduced.doc;
    for (auto& s : spec.reduced.table.sigma) {
        const std::string& base = spec.reduced.input_base.at(s);
        spec.base_symbol.push_back(
            int(std::find(d.input_alphabet.begin(), d.input_alphabet.end(), base) - d.input_alphabet.begin()));
    }
    for (auto& conj : sentence_dnf(simplify(nnf(work.body)))) {
        F body = simplify(mk_and(conj));
        if (body->kind == Kind::False) continue;
        spec.branches.push_back(compile_branch(body, work, spec.reduced.table));
    }
    return spec;
}

SatResult check_sat(const CompiledSpec& spec, const QueryOptions& opt) {
    SatResult r;
    bool undecided = false;
    for (auto& b : spec.branches) {
        try {
            auto g = leveled(b, opt, r.visited, [](ProfileSearch& s) { return s.find_any(); });
            if (g) {
                r.verdict = Verdict::Sat;
                r.witness = spec.project(*g);
                return r;
            }
        } catch (const BudgetExceeded&) {
            undecided = true;
        }
    }
    r.verdict = undecided ? Verdict::Indeterminate : Verdict::Unsat;
    return r;
}

Verdict is_satisfiable(const CompiledSpec& spec, const QueryOptions& opt) { return check_sat(spec, opt).verdict; }

std::optional<OGraph> witness(const CompiledSpec& spec, const QueryOptions& opt) {
    SatResult r = check_sat(spec, opt);
    if (r.verdict == Verdict::Indeterminate) throw BudgetExceeded(r.visited);
    return r.witness;
}

std::optional<RawModel> find_model(const CompiledSpec& spec, const std::vector<std::string>& u,
                                   const QueryOptions& opt) {
    std::vector<std::vector<int>> choices;
    if (!u.empty()) choices = choices_for(spec, u);
    std::size_t used = 0;
    for (std::size_t i = 0; i < spec.branches.size(); ++i) {
        auto g = leveled(spec.branches[i], opt, used, [&](ProfileSearch& s) {
            return choices.empty() ? s.find_any() : s.find_for(choices);
        });
        if (g) return RawModel{i, *g};
    }
    return std::nullopt;
}

std::optional<OGraph> apply_spec(const CompiledSpec& spec, const std::vector<std::string>& u, const QueryOptions& opt) {
    auto choices = choices_for(spec, u);
    std::size_t used = 0;
    for (auto& b : spec.branches) {
        auto g = leveled(b, opt, used, [&](ProfileSearch& s) { return s.find_for(choices); });
        if (g) return spec.project(*g);
    }
    return std::nullopt;
}

bool domain_contains(const CompiledSpec& spec, const std::vector<std::string>& u, const QueryOptions& opt) {
    return apply_spec(spec, u, opt).has_value();
}

Nfa domain_nfa(const CompiledSpec& spec, const QueryOptions& opt) {
    Nfa r(spec.sigma());
    std::size_t used = 0;
    for (auto& b : spec.branches) {
        ProfileSearch search(*b.ctx, SearchOptions{remaining(opt, used), b.allowed});
        Nfa a = search.domain_nfa();
        used += search.stats().visited;
        int off = r.num_states();
        for (int q = 0; q < a.num_states(); ++q) r.add_state("", a.initial[q], a.final[q]);
        for (int p = 0; p < a.num_states(); ++p)
            for (int s = 0; s < a.num_symbols(); ++s)
                for (int q : a.delta[p][s]) r.add_transition(off + p, spec.base_symbol[s], off + q);
    }
    r = trim(r);
    if (r.num_states() == 0) r.add_state("", true, false);
    return r;
}

EquivResult equivalent(const Document& a, const Document& b, const PredicateTable& table, const QueryOptions& opt) {
    if (!a.setvars.empty() || !b.setvars.empty())
        throw Error(ErrorKind::NotClosedUnderNegation, "formulas with set quantifiers are not closed under negation");
    if (a.input_alphabet != b.input_alphabet || a.output_alphabet != b.output_alphabet)
        throw Error(ErrorKind::Input, "equivalence needs the same alphabets on both sides");
    Document diff = a;
    diff.body = mk_not(mk_iff(a.body, b.body));
    SatResult s = check_sat(compile(diff, table), opt);
    EquivResult r;
    r.visited = s.visited;
    r.counterexample = s.witness;
    r.verdict = s.verdict == Verdict::Sat     ? Verdict::Unsat
                : s.verdict == Verdict::Unsat ? Verdict::Sat
                                              : Verdict::Indeterminate;
    return r;
}

bool bounded_functional(const Document& d, const PredicateTable& table, int n, int max_output) {
    std::vector<std::vector<std::string>> layer{{}};
    for (int len = 1; len <= n; ++len) {
        std::vector<std::vector<std::string>> next;
        for (auto& w : layer)
            for (auto& s : d.input_alphabet) {
                auto v = w;
                v.push_back(s);
                if (brute_models(d, table, v, max_output).size() > 1) return false;
                next.push_back(std::move(v));
            }
        layer = std::move(next);
    }
    return true;
}

} // namespace ltsynth
