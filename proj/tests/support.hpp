#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ltsynth/logic.hpp"

namespace testsupport {

inline std::string root() { return LTSYNTH_ROOT; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    ltsynth::PredicateTable table;
    ltsynth::Document doc;
};

inline Loaded load_text(const std::string& text, bool with_preds = true) {
    Loaded l;
    l.doc = ltsynth::load_document(text, with_preds ? root() + "/preds" : "", l.table);
    return l;
}

inline Loaded load(const std::string& name) { return load_text(slurp(root() + "/corpus/" + name + ".lt")); }

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names{
        "top",         "pres",        "bij",       "shuffle", "id",       "sort",     "abab",
        "reverse",     "pres_contra", "bij_contra", "b_from_a", "between", "elt_mark", "elt_even"};
    return names;
}

inline std::vector<std::string> word(const std::string& s) {
    std::vector<std::string> w;
    for (char c : s) w.push_back(std::string(1, c));
    return w;
}

} // namespace testsupport
