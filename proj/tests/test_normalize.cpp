#include "doctest.h"

#include "ltsynth/normalize.hpp"
#include "ltsynth/oracle.hpp"
#include "support.hpp"

using namespace ltsynth;
using namespace testsupport;

namespace {

std::vector<std::string> plain_corpus() {
    std::vector<std::string> r;
    for (auto& n : corpus_names())
        if (load(n).doc.setvars.empty()) r.push_back(n);
    return r;
}

// every labelling of the outputs of g with extended labels over the same base
bool some_extension(const OGraph& g, const std::vector<std::string>& bits,
                    const std::function<bool(const OGraph&)>& pred) {
    unsigned nm = 1u << bits.size();
    std::size_t m = g.output.size();
    std::vector<unsigned> masks(m, 0);
    while (true) {
        OGraph h = g;
        for (std::size_t i = 0; i < m; ++i) h.output[i] = ext_label(g.output[i], bits, masks[i]);
        if (pred(h)) return true;
        std::size_t k = 0;
        while (k < m && masks[k] == nm - 1) masks[k++] = 0;
        if (k == m) return false;
        ++masks[k];
    }
}

} // namespace

TEST_CASE("non-erasing transformation of true") {
    auto t = load_text("input: a b\noutput: a\ntrue");
    Document ne = make_non_erasing(t.doc);
    CHECK(ne.output_alphabet == std::vector<std::string>{"a", "#", "^a", "^b"});
    EnumConfig cfg{{"a", "b"}, ne.output_alphabet, 1, 2, 4, false};
    std::size_t models = 0;
    enumerate_ographs(cfg, [&](const OGraph& g) {
        std::size_t n = g.input.size();
        bool shape = g.output.size() >= n + 1;
        if (shape) {
            std::size_t k = g.output.size() - n - 1;
            for (std::size_t i = 0; i < k; ++i) shape = shape && g.output[i] == "a";
            shape = shape && g.output[k] == "#" && g.origin[k] == 1;
            for (std::size_t i = 0; i < n; ++i)
                shape = shape && g.output[k + 1 + i] == "^" + g.input[i] && g.origin[k + 1 + i] == int(i) + 1;
        }
        bool holds = oracle_holds(ne, g, t.table);
        CHECK_MESSAGE(holds == shape, print_ograph(g));
        models += holds;
        return true;
    });
    // |u| = 1: v of length 0..2 with 1 origin each; |u| = 2: v of length 0..1
    CHECK(models == 2 * 3 + 4 * (1 + 2));
    CHECK_THROWS_AS(make_non_erasing(load_text("input: a\noutput: #\ntrue", false).doc), Error);
}

TEST_CASE("non-erasing transformation keeps the domain") {
    for (auto name : {"bij", "b_from_a", "pres"}) {
        auto l = load(name);
        Document ne = make_non_erasing(l.doc);
        auto dom = brute_domain(l.doc, l.table, 3, 3);
        for (int n = 1; n <= 3; ++n) {
            EnumConfig cfg{l.doc.input_alphabet, l.doc.output_alphabet, n, n, 2, false};
            std::set<std::vector<std::string>> seen;
            enumerate_ographs(cfg, [&](const OGraph& g) {
                bool orig = oracle_holds(l.doc, g, l.table);
                OGraph h = g;
                h.output.push_back("#");
                h.origin.push_back(1);
                for (int i = 0; i < n; ++i) h.output.push_back("^" + g.input[i]), h.origin.push_back(i + 1);
                CHECK(is_non_erasing(h));
                CHECK_MESSAGE(oracle_holds(ne, h, l.table) == orig, name, " ", print_ograph(g));
                if (orig) seen.insert(g.input);
                return true;
            });
            for (auto& u : seen) CHECK(dom.count(u));
        }
    }
}

TEST_CASE("output form") {
    auto l = load("pres");
    F f = to_output_form(parse_formula("exists x. {lab_a}(x)", l.table));
    // the first disjunct reads an input predicate at an output position and folds away
    CHECK(print(output_form(parse_formula("exists x. {lab_a}(x)", l.table))) ==
          "(exists_out x. {lab_a}(x)) | exists_out x. {lab_a}(o(x))");
    CHECK(print(f) == "exists_out x. {lab_a}(o(x))");
    CHECK(structurally_equal(to_output_form(l.doc.body), split_and_type(l.doc.body)));
    for (auto& n : plain_corpus()) {
        auto c = load(n);
        F of = to_output_form(c.doc.body);
        EnumConfig cfg{c.doc.input_alphabet, c.doc.output_alphabet, 1, 3, 3, true};
        enumerate_ographs(cfg, [&](const OGraph& g) {
            CHECK_MESSAGE(evaluate(of, g, c.table) == evaluate(c.doc.body, g, c.table), n, " ", print_ograph(g));
            return true;
        });
    }
}

TEST_CASE("scott normal form shapes") {
    auto l = load("pres");
    SnfFormula q = scott_normal_form(to_output_form(parse_formula("true", l.table)), {"a", "b"});
    CHECK(q.exists_parts.empty());
    CHECK(q.all->kind == Kind::True);

    auto bij = load("bij");
    SnfFormula s = scott_normal_form(to_output_form(bij.doc.body), bij.doc.output_alphabet);
    CHECK(s.bits.empty());
    CHECK(s.all->kind != Kind::True);
    CHECK(is_quantifier_free(s.all));
    for (auto& e : s.exists_parts) CHECK(is_quantifier_free(e));

    CHECK_THROWS_AS(scott_normal_form(bij.doc.body, bij.doc.output_alphabet), Error);
    auto nested = load_text("input: a b\noutput: a b\n"
                            "forall_out x. lab_a(x) -> (exists_out y. lab_b(y)) & exists_out y. {lt}(o(x), o(y))");
    SnfFormula n = scott_normal_form(to_output_form(nested.doc.body), {"a", "b"});
    CHECK(dump_snf(n).find("forall x exists y") != std::string::npos);
}

TEST_CASE("scott normal form keeps models") {
    auto extra = load_text("input: a b\noutput: a b\n"
                           "(exists_out x. lab_a(x) & forall_out y. y <=out x) | forall_out x. exists_out y. "
                           "lab_b(y) & !(x = y)");
    std::vector<Loaded> docs{extra};
    for (auto& n : plain_corpus()) docs.push_back(load(n));
    for (auto& c : docs) {
        F of = to_output_form(c.doc.body);
        SnfFormula s = scott_normal_form(of, c.doc.output_alphabet);
        F sf = snf_formula(s);
        EnumConfig cfg{c.doc.input_alphabet, c.doc.output_alphabet, 1, 2, 2, true};
        enumerate_ographs(cfg, [&](const OGraph& g) {
            bool want = evaluate(c.doc.body, g, c.table);
            bool got = some_extension(g, s.bits, [&](const OGraph& h) { return evaluate(sf, h, c.table); });
            CHECK_MESSAGE(want == got, print(c.doc.body), " ", print_ograph(g));
            return true;
        });
    }
}

TEST_CASE("constraint compilation") {
    auto l = load("pres");
    auto t = compile_mcp(scott_normal_form(mk_true(), {"a", "b"}), l.table);
    CHECK(t.exists.empty());
    CHECK(t.forall.empty());

    F f = parse_formula("forall_out x. forall_out y. !(lab_a(x) & lab_b(y) & x <=out y & {leq}(o(x), o(y)))", l.table);
    auto c = compile_mcp(scott_normal_form(to_output_form(f), {"a", "b"}), l.table);
    REQUIRE(c.forall.size() == 1);
    CHECK(c.labels[c.forall[0].label1] == "a");
    CHECK(c.labels[c.forall[0].label2] == "b");
    CHECK(c.forall[0].dir == Dir::Up);
    CHECK(c.preds[c.forall[0].pred].base.num_states() == 3);
    CHECK(c.exists.empty());
}

TEST_CASE("constraints agree with the normal form") {
    std::vector<Loaded> docs;
    for (auto& n : plain_corpus()) docs.push_back(load(n));
    docs.push_back(load_text("input: a b\noutput: a b\n"
                             "exists_out x. lab_a(x) & forall_out y. (y <=out x | {lab_b}(o(y)))"));
    for (auto& c : docs) {
        SnfFormula s = scott_normal_form(to_output_form(c.doc.body), c.doc.output_alphabet);
        McpInstance m = compile_mcp(s, c.table);
        for (auto& l : m.labels) CHECK(std::find(c.doc.output_alphabet.begin(), c.doc.output_alphabet.end(),
                                                 label_base(l)) != c.doc.output_alphabet.end());
        F sf = snf_formula(s);
        EnumConfig cfg{c.doc.input_alphabet, m.labels, 1, 2, 2, true};
        enumerate_ographs(cfg, [&](const OGraph& g) {
            CHECK_MESSAGE(evaluate(sf, g, c.table) == satisfies_mcp(g, m), print(c.doc.body), " ", print_ograph(g));
            return true;
        });
    }
}
