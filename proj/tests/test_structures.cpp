#include "doctest.h"

#include <random>

#include "ltsynth/structures.hpp"

using namespace ltsynth;

namespace {

// all o-graphs with |u| <= n, |v| <= m over {a,b} / {c,d}
std::vector<OGraph> small_graphs(int n, int m) {
    std::vector<OGraph> out;
    const std::vector<std::string> in{"a", "b"}, ou{"c", "d"};
    for (int len = 1; len <= n; ++len)
        for (int ucode = 0; ucode < (1 << len); ++ucode)
            for (int vlen = 0; vlen <= m; ++vlen)
                for (int vcode = 0; vcode < (1 << vlen); ++vcode) {
                    int combos = 1;
                    for (int k = 0; k < vlen; ++k) combos *= len;
                    for (int oc = 0; oc < combos; ++oc) {
                        OGraph g;
                        for (int k = 0; k < len; ++k) g.input.push_back(in[(ucode >> k) & 1]);
                        int c = oc;
                        for (int k = 0; k < vlen; ++k) {
                            g.output.push_back(ou[(vcode >> k) & 1]);
                            g.origin.push_back(c % len + 1);
                            c /= len;
                        }
                        out.push_back(g);
                    }
                }
    return out;
}

} // namespace

TEST_CASE("is_non_erasing") {
    CHECK(is_non_erasing({{"a", "b"}, {"b", "a"}, {2, 1}}));
    CHECK_FALSE(is_non_erasing({{"a", "b"}, {"a"}, {1}}));
    CHECK_FALSE(is_non_erasing({{"a"}, {}, {}}));
}

TEST_CASE("t2d on the worked example") {
    OGraph g{{"#", "$", "@", "#", "#"}, {"a", "b", "c", "c", "a", "b"}, {3, 2, 1, 3, 5, 4}};
    auto w = t2d(g);
    CHECK(print_data_word(w) == "a:3:@ b:2:$ c:1:# c:3:@ a:5:# b:4:#");
    CHECK(t2d_inv(w) == g);
    CHECK(print_data_word(t2d({{"a"}, {"b"}, {1}})) == "b:1:a");
    CHECK(t2d_inv(parse_data_word("b:1:a")) == OGraph{{"a"}, {"b"}, {1}});
    CHECK_THROWS_AS(t2d({{"a", "b"}, {"a"}, {1}}), Error);
}

TEST_CASE("t2d_inv rejects invalid data words") {
    CHECK_THROWS_AS(parse_data_word("a:2:x"), Error);
    CHECK_THROWS_AS(parse_data_word("a:1:x b:1:y"), Error);
    CHECK_THROWS_AS(t2d_inv(TypedDataWord{}), Error);
    CHECK_THROWS_AS(parse_data_word("a-1-x"), Error);
}

TEST_CASE("t2d round trip exhaustive up to size 3") {
    int count = 0;
    for (auto& g : small_graphs(3, 3)) {
        if (!is_non_erasing(g)) continue;
        ++count;
        auto w = t2d(g);
        CHECK_NOTHROW(w.validate());
        CHECK(t2d_inv(w) == g);
        CHECK(t2d(t2d_inv(w)) == w);
    }
    CHECK(count > 0);
}

TEST_CASE("t2d round trip on random graphs") {
    std::mt19937 rng(11);
    for (int k = 0; k < 1000; ++k) {
        int n = 1 + rng() % 5, extra = rng() % 4;
        OGraph g;
        for (int i = 0; i < n; ++i) g.input.push_back(rng() % 2 ? "a" : "b");
        std::vector<int> orig;
        for (int i = 1; i <= n; ++i) orig.push_back(i);
        for (int i = 0; i < extra; ++i) orig.push_back(1 + rng() % n);
        std::shuffle(orig.begin(), orig.end(), rng);
        for (int o : orig) g.output.push_back(rng() % 2 ? "c" : "d"), g.origin.push_back(o);
        REQUIRE(is_non_erasing(g));
        CHECK(t2d_inv(t2d(g)) == g);
        auto w = t2d(g);
        CHECK(t2d(t2d_inv(w)) == w);
    }
}

TEST_CASE("o-graph text format") {
    auto g = parse_ograph("in: # $ @ # #\nout: a b c c a b\norig: 3 2 1 3 5 4\n");
    CHECK(g.input.size() == 5);
    CHECK(parse_ograph(print_ograph(g)) == g);
    CHECK_THROWS_AS(parse_ograph("in:\nout:\norig:\n"), Error);
    CHECK_THROWS_AS(parse_ograph("in: a\nout: b\norig: 2\n"), Error);
    CHECK_THROWS_AS(parse_ograph("out: b\n"), Error);
}
