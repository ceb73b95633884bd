#include "doctest.h"

#include <random>

#include "ltsynth/oracle.hpp"
#include "support.hpp"

using namespace ltsynth;
using namespace testsupport;

namespace {

std::vector<OGraph> non_erasing_upto3(const Document& d) {
    EnumConfig cfg{d.input_alphabet, d.output_alphabet, 1, 3, 3, true};
    return enumerate_ographs(cfg);
}

OGraph random_graph(std::mt19937& rng, const std::vector<std::string>& in, const std::vector<std::string>& out) {
    OGraph g;
    int n = 1 + rng() % 3, m = rng() % 4;
    for (int i = 0; i < n; ++i) g.input.push_back(in[rng() % in.size()]);
    for (int i = 0; i < m; ++i) g.output.push_back(out[rng() % out.size()]), g.origin.push_back(1 + rng() % n);
    return g;
}

} // namespace

TEST_CASE("parse and print") {
    auto l = load("pres");
    CHECK(print(l.doc.body) == "forall_out x. forall_out y. x <=out y -> {leq}(o(x), o(y))");
    CHECK(parse_formula("true", l.table)->kind == Kind::True);
    CHECK_THROWS_WITH_AS(parse_formula("forall x. forall y. exists z. x = z", l.table), doctest::Contains("third"),
                         Error);
    try {
        parse_formula("forall x. forall y. exists z. x = z", l.table);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::VariableLimit);
    }
    auto kind_of = [&](const std::string& s) {
        try {
            parse_formula(s, l.table);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Input;
    };
    CHECK(kind_of("exists x. {nope}(x)") == ErrorKind::UnknownPredicate);
    CHECK(kind_of("exists x. {leq}(x)") == ErrorKind::Arity);
    CHECK(kind_of("exists x. x <=out") == ErrorKind::Syntax);
    CHECK(kind_of("exists x. (lab_a(x)") == ErrorKind::Syntax);
    // round trip through the printer
    for (auto& n : corpus_names()) {
        auto c = load(n);
        F again = parse(print(c.doc), c.table).body;
        CHECK(structurally_equal(again, c.doc.body));
    }
    CHECK(print(load("elt_mark").doc).find("exists2 X.") != std::string::npos);
}

TEST_CASE("evaluate on the worked examples") {
    auto id3 = load_text(
        "input: a b c\noutput: a b c\n"
        "(forall_out x. (lab_a(x) <-> {lab_a}(o(x))) & (lab_b(x) <-> {lab_b}(o(x))) & (lab_c(x) <-> {lab_c}(o(x))))"
        " & (forall_out x. forall_out y. x <=out y <-> {leq}(o(x), o(y)))"
        " & (forall_in x. exists_out y. o(y) = x)",
        false);
    CHECK(evaluate(id3.doc, OGraph{word("abc"), word("abc"), {1, 2, 3}}, id3.table));
    CHECK_FALSE(evaluate(id3.doc, OGraph{word("abc"), word("acb"), {1, 3, 2}}, id3.table));
    auto sh = load("shuffle"), pr = load("pres");
    OGraph swap{word("ab"), word("ba"), {2, 1}};
    CHECK(evaluate(sh.doc, swap, sh.table));
    CHECK_FALSE(evaluate(pr.doc, swap, pr.table));
    auto ab = load("abab");
    CHECK(evaluate(ab.doc, OGraph{word("abab"), word("aabb"), {1, 3, 2, 4}}, ab.table));
    CHECK_FALSE(evaluate(ab.doc, OGraph{word("abab"), word("abab"), {1, 2, 3, 4}}, ab.table));
    CHECK_THROWS_AS(evaluate(mk_label("a", tv(0)), swap, sh.table), Error);
}

TEST_CASE("type-inconsistent atoms are false") {
    auto l = load("top");
    OGraph g{word("ab"), word("a"), {1}};
    CHECK_FALSE(evaluate(parse_formula("exists_in x. lab_a(x)", l.table), g, l.table));
    CHECK_FALSE(evaluate(parse_formula("exists_out x. {lab_a}(x)", l.table), g, l.table));
    CHECK(evaluate(parse_formula("exists_out x. {lab_a}(o(x))", l.table), g, l.table));
    CHECK(evaluate(parse_formula("exists_out x. exists_in y. o(x) = y & {first}(y)", l.table), g, l.table));
    CHECK(evaluate(parse_formula("exists x. exists y. in(x) & out(y) & !(x = y)", l.table), g, l.table));
}

TEST_CASE("evaluate agrees with the separate oracle semantics") {
    for (auto& n : corpus_names()) {
        auto c = load(n);
        if (!c.doc.setvars.empty()) continue;
        EnumConfig cfg{c.doc.input_alphabet, c.doc.output_alphabet, 1, 3, 3, false};
        int k = 0;
        enumerate_ographs(cfg, [&](const OGraph& g) {
            CHECK(evaluate(c.doc.body, g, c.table) == oracle_holds(c.doc.body, g, c.table));
            return ++k < 4000;
        });
    }
}

TEST_CASE("evaluate_ld") {
    auto l = load("top");
    F f = parse_formula("forall x. exists y. {leq_data}(y, x)", l.table);
    CHECK(evaluate_ld(f, parse_data_word("a:2:b b:1:a a:2:b"), l.table));
    auto pr = load("pres");
    F ld = lt_to_ld(pr.doc.body);
    CHECK(evaluate_ld(ld, t2d({word("aba"), word("aba"), {1, 2, 3}}), pr.table));
    CHECK_FALSE(evaluate_ld(ld, t2d({word("ab"), word("ab"), {2, 1}}), pr.table));
    CHECK_THROWS_AS(evaluate_ld(f, TypedDataWord{}, l.table), Error);
    CHECK_THROWS_AS(evaluate_ld(pr.doc.body, parse_data_word("a:1:a"), l.table), Error);
}

TEST_CASE("negate") {
    CHECK(negate(mk_true())->kind == Kind::False);
    auto bij = load("bij");
    CHECK(evaluate(negate(bij.doc), OGraph{word("ab"), word("a"), {1}}, bij.table));
    CHECK_THROWS_AS(negate(load("elt_mark").doc), Error);
    std::mt19937 rng(3);
    for (auto& n : corpus_names()) {
        auto c = load(n);
        if (!c.doc.setvars.empty()) continue;
        F nn = negate(negate(c.doc.body));
        F ne = negate(c.doc.body);
        for (int k = 0; k < 500; ++k) {
            OGraph g = random_graph(rng, c.doc.input_alphabet, c.doc.output_alphabet);
            bool v = evaluate(c.doc.body, g, c.table);
            CHECK(evaluate(nn, g, c.table) == v);
            CHECK(evaluate(ne, g, c.table) == !v);
        }
    }
}

TEST_CASE("lt_to_ld rewrites") {
    auto l = load("top");
    F f = parse_formula("forall x. {lab_a}(x) -> exists y. {leq}(o(y), x)", l.table);
    CHECK(print(lt_to_ld(f), true) == "forall x. {lab_a}(x) -> exists y. {leq_data}(y, x)");
    CHECK(lt_to_ld(mk_true())->kind == Kind::True);
    CHECK(print(ld_to_lt(parse_formula("exists x. true", l.table))) == "exists_out x. true");
    CHECK(print(lt_to_ld(load("pres").doc.body), true) == "forall x. forall y. x <= y -> {leq_data}(x, y)");
}

TEST_CASE("lt_to_ld preserves truth on non-erasing graphs") {
    for (auto& n : corpus_names()) {
        auto c = load(n);
        if (!c.doc.setvars.empty()) continue;
        F ld = lt_to_ld(c.doc.body);
        F back = ld_to_lt(ld);
        for (auto& g : non_erasing_upto3(c.doc)) {
            bool v = evaluate(c.doc.body, g, c.table);
            CHECK_MESSAGE(evaluate_ld(ld, t2d(g), c.table) == v, n);
            CHECK_MESSAGE(evaluate(back, g, c.table) == v, n);
        }
    }
}

TEST_CASE("ld_to_lt preserves truth on data words") {
    auto l = load("top");
    std::vector<F> ds{parse_formula("forall x. exists y. {lt_data}(x, y) | lab_a(x)", l.table),
                      parse_formula("forall x. forall y. x <= y -> {leq_data}(x, y)", l.table),
                      parse_formula("exists x. exists y. {eq_data}(x, y) & !(x = y) & {lab_b}(x)", l.table)};
    for (auto& d : ds) {
        F lt = ld_to_lt(d);
        enumerate_data_words({"a", "b"}, {"a", "b"}, 3, [&](const TypedDataWord& w) {
            CHECK(evaluate(lt, t2d_inv(w), l.table) == evaluate_ld(d, w, l.table));
            return true;
        });
    }
}

TEST_CASE("output_form agrees on non-erasing graphs") {
    auto l = load("top");
    F f = parse_formula("exists x. {lab_a}(x)", l.table);
    CHECK(print(output_form(f)) == "(exists_out x. {lab_a}(x)) | exists_out x. {lab_a}(o(x))");
    for (auto& n : corpus_names()) {
        auto c = load(n);
        if (!c.doc.setvars.empty()) continue;
        F of = output_form(c.doc.body);
        for (auto& g : non_erasing_upto3(c.doc)) CHECK(evaluate(of, g, c.table) == evaluate(c.doc.body, g, c.table));
    }
}

TEST_CASE("elt_reduce") {
    auto top = load("top");
    auto r0 = elt_reduce(top.doc, top.table);
    CHECK(structurally_equal(r0.doc.body, top.doc.body));
    CHECK(r0.input_base.at("a") == "a");
    auto m = load("elt_mark");
    auto r = elt_reduce(m.doc, m.table);
    CHECK(r.doc.setvars.empty());
    CHECK(r.doc.input_alphabet.size() == 4);
    // models of the reduction project onto models of the original
    EnumConfig cfg{r.doc.input_alphabet, r.doc.output_alphabet, 1, 2, 2, false};
    std::set<OGraph> projected;
    enumerate_ographs(cfg, [&](const OGraph& g) {
        if (evaluate(r.doc.body, g, r.table)) projected.insert(project_graph(g, r.input_base, r.output_base));
        return true;
    });
    std::set<OGraph> direct;
    EnumConfig base{m.doc.input_alphabet, m.doc.output_alphabet, 1, 2, 2, false};
    enumerate_ographs(base, [&](const OGraph& g) {
        if (evaluate(m.doc, g, m.table)) direct.insert(g);
        return true;
    });
    CHECK(!direct.empty());
    CHECK(projected == direct);
}
