#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ltsynth/oracle.hpp"
#include "ltsynth/synthesis.hpp"

using namespace ltsynth;

namespace {

constexpr int kExitInput = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Input, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Input, "cannot write '" + path + "'");
    out << text;
}

struct Loaded {
    PredicateTable table;
    Document doc;
};

Loaded load(const std::string& path, const std::string& preds) {
    Loaded l;
    l.doc = load_document(slurp(path), preds, l.table);
    return l;
}

// "a b" or, when every letter is one character, "ab"
std::vector<std::string> letters(const std::string& w) {
    if (w.find_first_of(" \t") != std::string::npos) return split_symbols(w);
    std::vector<std::string> r;
    for (char c : w) r.push_back(std::string(1, c));
    return r;
}

int verdict_exit(Verdict v) { return v == Verdict::Sat ? 0 : v == Verdict::Unsat ? 1 : 2; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Origin transduction logic: satisfiability, domains and synthesis"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string preds;
    std::size_t budget = 1000000;
    int max_out = 4;
    app.add_option("--preds", preds, "directory of predicate automata");
    app.add_option("--budget", budget, "cap on explored search states");
    app.add_option("--max-out", max_out, "output length bound of the brute-force oracle");

    std::string file, file2, graph, word, nfa_out, dot_out, dot_input;
    bool to_ld = false, to_lt = false;
    int n = 3;

    auto* sat = app.add_subcommand("sat", "decide satisfiability");
    sat->add_option("formula", file)->required();
    auto* wit = app.add_subcommand("witness", "print a model");
    wit->add_option("formula", file)->required();
    auto* dom = app.add_subcommand("domain", "input domain");
    dom->add_option("formula", file)->required();
    auto* member = dom->add_option("--member", word, "input word to test");
    auto* nfa = dom->add_option("--nfa", nfa_out, "write the domain automaton");
    auto* app_cmd = app.add_subcommand("apply", "run the canonical function on an input word");
    app_cmd->add_option("formula", file)->required();
    app_cmd->add_option("input", word)->required();
    auto* eq = app.add_subcommand("equiv", "decide equivalence");
    eq->add_option("formula1", file)->required();
    eq->add_option("formula2", file2)->required();
    auto* mc = app.add_subcommand("modelcheck", "evaluate a formula on an o-graph");
    mc->add_option("formula", file)->required();
    mc->add_option("graph", graph)->required();
    auto* tr = app.add_subcommand("translate", "between origin and data formulas");
    tr->add_option("formula", file)->required();
    auto* ld_flag = tr->add_flag("--to-ld", to_ld, "origin formula to data formula");
    tr->add_flag("--to-lt", to_lt, "data formula to origin formula")->excludes(ld_flag);
    auto* dot = app.add_subcommand("export_dot", "profile graph of a model");
    dot->add_option("formula", file)->required();
    dot->add_option("--input", dot_input, "input word; any input when absent");
    dot->add_option("-o,--out", dot_out, "output file; stdout when absent");
    auto* fn = app.add_subcommand("functional", "bounded functionality check with the oracle");
    fn->add_option("formula", file)->required();
    fn->add_option("-n", n, "input length bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    QueryOptions opt{budget};
    try {
        if (*sat) {
            auto l = load(file, preds);
            SatResult r = check_sat(compile(l.doc, l.table), opt);
            std::cout << verdict_name(r.verdict) << "\n";
            std::cerr << "visited " << r.visited << "\n";
            return verdict_exit(r.verdict);
        }
        if (*wit) {
            auto l = load(file, preds);
            SatResult r = check_sat(compile(l.doc, l.table), opt);
            if (r.witness) std::cout << print_ograph(*r.witness);
            else std::cout << verdict_name(r.verdict) << "\n";
            return verdict_exit(r.verdict);
        }
        if (*dom) {
            auto l = load(file, preds);
            CompiledSpec spec = compile(l.doc, l.table);
            if (!*member && !*nfa) throw Error(ErrorKind::Input, "domain needs --member or --nfa");
            int code = 0;
            if (*member) {
                bool in = domain_contains(spec, letters(word), opt);
                std::cout << (in ? "MEMBER" : "NOT MEMBER") << "\n";
                code = in ? 0 : 1;
            }
            if (*nfa) {
                Nfa a = domain_nfa(spec, opt);
                spill(nfa_out, print_nfa(a));
                std::cout << "wrote " << a.num_states() << " states\n";
            }
            return code;
        }
        if (*app_cmd) {
            auto l = load(file, preds);
            auto g = apply_spec(compile(l.doc, l.table), letters(word), opt);
            if (!g) {
                std::cout << "NONE\n";
                return 1;
            }
            std::cout << print_ograph(*g);
            return 0;
        }
        if (*eq) {
            auto a = load(file, preds);
            auto b = load(file2, preds);
            EquivResult r = equivalent(a.doc, b.doc, a.table, opt);
            if (r.verdict == Verdict::Sat) std::cout << "EQUIVALENT\n";
            else if (r.verdict == Verdict::Unsat) std::cout << "NOT EQUIVALENT\n" << print_ograph(*r.counterexample);
            else std::cout << "INDETERMINATE\n";
            return verdict_exit(r.verdict);
        }
        if (*mc) {
            auto l = load(file, preds);
            OGraph g = parse_ograph(slurp(graph));
            bool ok = evaluate(l.doc, g, l.table);
            std::cout << (ok ? "TRUE" : "FALSE") << "\n";
            return ok ? 0 : 1;
        }
        if (*tr) {
            auto l = load(file, preds);
            if (!to_ld && !to_lt) throw Error(ErrorKind::Input, "translate needs --to-ld or --to-lt");
            if (!l.doc.setvars.empty()) throw Error(ErrorKind::Input, "set quantifiers cannot be translated");
            if (to_ld) std::cout << print(lt_to_ld(l.doc.body), true) << "\n";
            else std::cout << print(ld_to_lt(l.doc.body)) << "\n";
            return 0;
        }
        if (*dot) {
            auto l = load(file, preds);
            CompiledSpec spec = compile(l.doc, l.table);
            auto m = find_model(spec, letters(dot_input), opt);
            if (!m) {
                std::cout << "NONE\n";
                return 1;
            }
            const Context& ctx = *spec.branches[m->branch].ctx;
            std::string text = to_dot(ctx, seq(ctx, m->graph));
            if (dot_out.empty()) std::cout << text;
            else spill(dot_out, text);
            return 0;
        }
        if (*fn) {
            auto l = load(file, preds);
            bool f = bounded_functional(l.doc, l.table, n, max_out);
            std::cout << (f ? "FUNCTIONAL" : "NOT FUNCTIONAL") << "\n";
            return f ? 0 : 1;
        }
    } catch (const BudgetExceeded& e) {
        std::cout << "INDETERMINATE\n";
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
