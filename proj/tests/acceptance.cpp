// One line per acceptance criterion; exit status 1 when any fails.
#include <chrono>
#include <iostream>
#include <sstream>

#include "ltsynth/oracle.hpp"
#include "ltsynth/synthesis.hpp"
#include "support.hpp"

using namespace ltsynth;
using namespace testsupport;

namespace {

using Strings = std::vector<std::string>;

struct Tally {
    long checks = 0;
    long failures = 0;
    std::string first;
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (!failures) first = what;
        ++failures;
    }
};

std::vector<Strings> inputs_upto(const Strings& sigma, int n) {
    std::vector<Strings> r, layer{{}};
    for (int k = 1; k <= n; ++k) {
        std::vector<Strings> next;
        for (auto& w : layer)
            for (auto& s : sigma) {
                auto v = w;
                v.push_back(s);
                next.push_back(v);
            }
        r.insert(r.end(), next.begin(), next.end());
        layer = next;
    }
    return r;
}

std::set<Strings> language_upto(const Nfa& a, int n) {
    std::set<Strings> r;
    for (auto& w : accepted_words_upto(a, n)) {
        Strings s;
        for (int c : w) s.push_back(a.alphabet[c]);
        r.insert(s);
    }
    return r;
}

std::string join(const Strings& w) {
    std::string s;
    for (auto& x : w) s += x;
    return s;
}

McpInstance mcp_of(const Loaded& l) {
    return compile_mcp(scott_normal_form(to_output_form(l.doc.body), l.doc.output_alphabet), l.table);
}

bool path_shape_ok(const Sequence& s, const std::vector<Vertex>& p) {
    std::size_t i = 0;
    while (i < p.size() && s[p[i].col].clauses[p[i].row].kind == CKind::Right) ++i;
    if (i == p.size() || s[p[i].col].clauses[p[i].row].kind != CKind::Local) return false;
    for (++i; i < p.size(); ++i)
        if (s[p[i].col].clauses[p[i].row].kind != CKind::Left) return false;
    return true;
}

bool antisymmetric(const std::vector<std::vector<char>>& less) {
    for (std::size_t i = 0; i < less.size(); ++i)
        for (std::size_t j = 0; j < less.size(); ++j)
            if (less[i][j] && less[j][i]) return false;
    return true;
}

// the structural checks shared by criteria 4 and 6
struct Structure {
    long gs = 0, orders = 0, shape_fail = 0, order_fail = 0;
    void check(const Context& ctx, const Sequence& s) {
        GsGraph g = build_gs(ctx, s);
        ++gs;
        auto paths = maximal_paths(s, g);
        for (auto& p : paths)
            if (!path_shape_ok(s, p)) ++shape_fail;
        ++orders;
        if (!antisymmetric(partial_order(s, paths))) ++order_fail;
    }
};

void report(int n, bool ok, const std::string& detail) {
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Loaded> sat_corpus(Strings& names) {
    std::vector<Loaded> r;
    for (auto& n : corpus_names()) {
        names.push_back(n);
        r.push_back(load(n));
    }
    // contradictions built by conjoining a formula with its negation
    for (auto n : {"id", "pres", "shuffle", "sort", "reverse"}) {
        Loaded l = load(n);
        l.doc.body = mk_and(l.doc.body, negate(l.doc));
        names.push_back(std::string(n) + "&!" + n);
        r.push_back(l);
    }
    return r;
}

bool criterion1(std::size_t& peak, std::string& peak_name) {
    auto t0 = std::chrono::steady_clock::now();
    Tally t;
    Strings names;
    auto docs = sat_corpus(names);
    int decisive = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto& l = docs[i];
        SatResult r = check_sat(compile(l.doc, l.table));
        if (r.visited > peak) peak = r.visited, peak_name = names[i];
        EnumConfig cfg{l.doc.input_alphabet, l.doc.output_alphabet, 1, 3, 4, false};
        auto b = brute_sat(l.doc, l.table, cfg);
        bool contradiction = names[i].find('!') != std::string::npos;
        if (b || contradiction) ++decisive;
        t.expect(r.verdict != Verdict::Indeterminate, names[i] + " indeterminate");
        if (b) t.expect(r.verdict == Verdict::Sat, names[i] + " oracle sat");
        if (contradiction) t.expect(r.verdict == Verdict::Unsat, names[i] + " contradiction");
        if (r.witness) t.expect(evaluate(l.doc, *r.witness, l.table), names[i] + " witness");
    }
    double secs = since(t0);
    bool ok = t.failures == 0 && docs.size() >= 12 && secs < 300;
    std::ostringstream os;
    os << docs.size() << " formulas, " << decisive << " decisive, " << t.failures << " disagreements, " << secs
       << " s" << (t.failures ? " first: " + t.first : "");
    report(1, ok, os.str());
    return ok;
}

bool criterion2() {
    Tally t;
    for (auto& n : corpus_names()) {
        auto l = load(n);
        Nfa a = domain_nfa(compile(l.doc, l.table));
        t.expect(language_upto(a, 4) == brute_domain(l.doc, l.table, 4, 4), n);
    }
    auto l = load("abab");
    auto lang = language_upto(domain_nfa(compile(l.doc, l.table)), 6);
    bool guarded = lang == std::set<Strings>{word("ab"), word("abab"), word("ababab")};
    t.expect(guarded, "abab up to length 6");
    std::ostringstream os;
    os << corpus_names().size() << " domains compared up to length 4; guarded domain up to 6:";
    for (auto& w : lang) os << ' ' << join(w);
    if (t.failures) os << "; first mismatch " << t.first;
    report(2, t.failures == 0, os.str());
    return t.failures == 0;
}

bool criterion3() {
    Tally t;
    long some = 0;
    for (auto& n : corpus_names()) {
        auto l = load(n);
        std::vector<CompiledSpec> specs;
        for (int k = 0; k < 3; ++k) specs.push_back(compile(l.doc, l.table));
        for (auto& u : inputs_upto(l.doc.input_alphabet, 3)) {
            std::vector<std::string> runs;
            std::optional<OGraph> g;
            for (auto& s : specs) {
                g = apply_spec(s, u);
                runs.push_back(g ? print_ograph(*g) : "none");
            }
            bool in_dom = !brute_models(l.doc, l.table, u, 4).empty();
            t.expect(g.has_value() == in_dom, n + " " + join(u) + " domain");
            t.expect(runs[0] == runs[1] && runs[1] == runs[2], n + " " + join(u) + " determinism");
            if (g) {
                ++some;
                t.expect(g->input == u && evaluate(l.doc, *g, l.table), n + " " + join(u) + " evaluate");
            }
        }
    }
    std::ostringstream os;
    os << t.checks << " checks, " << some << " outputs verified" << (t.failures ? ", first: " + t.first : "");
    report(3, t.failures == 0, os.str());
    return t.failures == 0;
}

bool criterion4(Structure& st) {
    Tally t;
    long models = 0, found = 0, linearizations = 0;
    for (auto n : {"top", "pres", "bij", "shuffle", "sort", "id", "reverse", "between"}) {
        auto l = load(n);
        Context ctx(mcp_of(l));
        EnumConfig cfg{l.doc.input_alphabet, ctx.mcp().labels, 1, 3, 4, true};
        enumerate_ographs(cfg, [&](const OGraph& g) {
            if (!satisfies_mcp(g, ctx.mcp())) return true;
            ++models;
            Sequence s = seq(ctx, g);
            t.expect(is_good(ctx, s) && is_maximal(ctx, s), std::string(n) + " model " + print_ograph(g));
            st.check(ctx, s);
            return true;
        });
    }
    // sequences found by the search, on the compiled branches of the whole corpus
    for (auto& n : corpus_names()) {
        auto l = load(n);
        CompiledSpec spec = compile(l.doc, l.table);
        for (auto& b : spec.branches) {
            const Context& ctx = *b.ctx;
            for (auto& u : inputs_upto(spec.reduced.doc.input_alphabet, 3)) {
                if (u.size() > 2 && spec.reduced.doc.input_alphabet.size() > 2) continue;
                Word w;
                for (auto& s : u) w.push_back(int(std::find(ctx.mcp().sigma.begin(), ctx.mcp().sigma.end(), s) -
                                                  ctx.mcp().sigma.begin()));
                ProfileSearch search(ctx, SearchOptions{1000000, b.allowed});
                auto g = search.find_for(w);
                if (!g) continue;
                ++found;
                Sequence s = seq(ctx, *g);
                t.expect(is_good(ctx, s), n + " found sequence");
                st.check(ctx, s);
                for (auto& h : all_linearizations(ctx, s, 24)) {
                    ++linearizations;
                    t.expect(satisfies_mcp(h, ctx.mcp()) && seq(ctx, h) == s, n + " linearization");
                }
            }
        }
    }
    bool ok = t.failures == 0 && models >= 500 && found >= 100;
    std::ostringstream os;
    os << models << " models abstracted, " << found << " search sequences, " << linearizations
       << " linearizations checked" << (t.failures ? ", first: " + t.first : "");
    report(4, ok, os.str());
    return ok;
}

bool criterion5() {
    Tally t;
    // round trips
    long graphs = 0, words = 0;
    EnumConfig cfg{{"a", "b"}, {"a", "b"}, 1, 3, 3, true};
    enumerate_ographs(cfg, [&](const OGraph& g) {
        ++graphs;
        t.expect(t2d_inv(t2d(g)) == g, "t2d round trip " + print_ograph(g));
        return true;
    });
    enumerate_data_words({"a", "b"}, {"a", "b"}, 3, [&](const TypedDataWord& w) {
        ++words;
        t.expect(t2d(t2d_inv(w)) == w, "t2d_inv round trip " + print_data_word(w));
        return true;
    });
    // translation preserves truth
    long evals = 0;
    for (auto& n : corpus_names()) {
        auto l = load(n);
        if (!l.doc.setvars.empty()) continue;
        F ld = lt_to_ld(l.doc.body);
        EnumConfig c{l.doc.input_alphabet, l.doc.output_alphabet, 1, 3, 3, true};
        enumerate_ographs(c, [&](const OGraph& g) {
            ++evals;
            t.expect(evaluate(l.doc.body, g, l.table) == evaluate_ld(ld, t2d(g), l.table), n + " " + print_ograph(g));
            return true;
        });
    }
    // data satisfiability through the origin logic
    auto base = load("pres");
    std::vector<std::string> data{
        "forall x. exists y. {lt_data}(x, y) | lab_a(x)",
        "forall x. forall y. x <= y -> {leq_data}(x, y)",
        "exists x. exists y. {eq_data}(x, y) & !(x = y) & {lab_b}(x)",
        "exists x. lab_a(x) & (forall y. !lab_a(y) | x = y) & exists y. lab_b(y) & {lt_data}(y, x)",
        "(exists x. lab_a(x)) & (forall x. !lab_a(x))",
        "forall x. forall y. {eq_data}(x, y) -> x = y",
        "exists x. exists y. {lt_data}(x, y) & {lt_data}(y, x)",
    };
    int sat_agree = 0;
    for (auto& text : data) {
        F f = parse_formula(text, base.table);
        Document d = base.doc;
        // data words are the images of non-erasing o-graphs
        F ne = mk_quant(QKind::Forall, QType::In, 0,
                        mk_quant(QKind::Exists, QType::Out, 1, mk_eq(to(1), tv(0))));
        d.body = mk_and(ld_to_lt(f), ne);
        SatResult r = check_sat(compile(d, base.table));
        auto b = brute_sat_ld(f, base.table, base.doc.output_alphabet, 4);
        bool ok = r.verdict != Verdict::Indeterminate && (r.verdict == Verdict::Sat) == b.has_value();
        if (r.witness) ok = ok && evaluate_ld(f, t2d(*r.witness), base.table);
        t.expect(ok, "data sat " + text);
        sat_agree += ok;
    }
    std::ostringstream os;
    os << graphs << " graphs and " << words << " data words round-trip, " << evals << " translated evaluations, "
       << sat_agree << "/" << data.size() << " data satisfiability answers agree"
       << (t.failures ? ", first: " + t.first : "");
    report(5, t.failures == 0, os.str());
    return t.failures == 0;
}

long unique_pred_cases(long& bad) {
    Strings sigma{"a", "b"};
    std::vector<QueryAutomaton> preds{pred_leq_in(sigma), pred_lt_in(sigma),    pred_eq(sigma),
                                      pred_succ_in(sigma), pred_label(sigma, "a"), pred_between(sigma, "b"),
                                      pred_first(sigma),   pred_true(sigma)};
    long cases = 0;
    for (auto& q : preds) {
        if (q.base.num_states() > 3) continue;
        McpInstance m;
        m.sigma = sigma;
        m.labels = {"a"};
        m.alive = {1};
        m.preds = {q};
        m.pred_names = {"q"};
        m.forall.push_back(UnConstraint{0, 0, Dir::Up, 0, false});
        Context ctx(m);
        int n = ctx.num_states();
        std::vector<int> rels;
        for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
            Bits r = ctx.empty_rel();
            for (int i = 0; i < n * n; ++i)
                if (bits >> i & 1) r.set(i);
            rels.push_back(ctx.intern_rel(r));
        }
        for (unsigned sm = 0; sm < (1u << n); ++sm)
            for (unsigned s2m = 0; s2m < (1u << n); ++s2m)
                for (int a = 0; a < 2; ++a) {
                    Bits s(n), s2(n);
                    for (int i = 0; i < n; ++i) {
                        if (sm >> i & 1) s.set(i);
                        if (s2m >> i & 1) s2.set(i);
                    }
                    std::vector<Clause> targets{{CKind::Local, 0, -1}};
                    for (int r : rels) targets.push_back({CKind::Right, 0, r});
                    for (auto& b : targets) {
                        int count = 0;
                        for (int r : rels) count += ctx.is_successor({CKind::Right, 0, r}, b, s, s2, a);
                        ++cases;
                        if (count > 1) ++bad;
                    }
                }
    }
    return cases;
}

bool criterion6(const Structure& st) {
    long bad = 0;
    long cases = unique_pred_cases(bad);
    bool ok = st.shape_fail == 0 && st.order_fail == 0 && bad == 0 && st.gs > 0;
    std::ostringstream os;
    os << st.gs << " graphs with " << st.shape_fail << " bad paths, " << st.orders << " orders with "
       << st.order_fail << " cycles, " << cases << " successor cases with " << bad << " multiple predecessors";
    report(6, ok, os.str());
    return ok;
}

bool criterion7(std::size_t peak, const std::string& peak_name) {
    bool ok = peak < 100000;
    std::ostringstream os;
    os << "peak visited states " << peak << " (" << peak_name << "), limit 100000";
    report(7, ok, os.str());
    return ok;
}

bool criterion8() {
    auto sh = load("shuffle");
    auto pr = load("pres");
    auto id = load("id");
    auto top = load("top");
    Document both = sh.doc;
    both.body = mk_and(sh.doc.body, pr.doc.body);
    EquivResult a = equivalent(both, id.doc, id.table);
    EquivResult b = equivalent(top.doc, id.doc, id.table);
    bool confirmed = false;
    std::string cex = "none";
    if (b.counterexample) {
        const OGraph& g = *b.counterexample;
        confirmed = evaluate(top.doc, g, top.table) != evaluate(id.doc, g, id.table);
        cex = print_ograph(g);
        for (auto& c : cex)
            if (c == '\n') c = ';';
    }
    bool ok = a.verdict == Verdict::Sat && b.verdict == Verdict::Unsat && confirmed;
    std::ostringstream os;
    os << "shuffle&pres vs id: " << (a.verdict == Verdict::Sat ? "equivalent" : "not equivalent")
       << "; top vs id: " << (b.verdict == Verdict::Unsat ? "not equivalent" : "equivalent") << ", counterexample "
       << cex << " confirmed by the model checker: " << (confirmed ? "yes" : "no");
    report(8, ok, os.str());
    return ok;
}

} // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t peak = 0;
    std::string peak_name;
    Structure st;
    bool all = true;
    all &= criterion1(peak, peak_name);
    all &= criterion2();
    all &= criterion3();
    all &= criterion4(st);
    all &= criterion5();
    all &= criterion6(st);
    all &= criterion7(peak, peak_name);
    all &= criterion8();
    std::cout << "total " << since(t0) << " s" << std::endl;
    return all ? 0 : 1;
}
