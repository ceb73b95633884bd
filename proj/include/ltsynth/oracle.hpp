#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltsynth/logic.hpp"

namespace ltsynth {

struct EnumConfig {
    std::vector<std::string> input_alphabet;
    std::vector<std::string> output_alphabet;
    int min_input = 1;
    int max_input = 3;
    int max_output = 4;
    bool non_erasing_only = false;
};

// Visits o-graphs ordered by input length, input word, output length, output word,
// origins. Stops early when visit returns false.
void enumerate_ographs(const EnumConfig& cfg, const std::function<bool(const OGraph&)>& visit);
std::vector<OGraph> enumerate_ographs(const EnumConfig& cfg);
// models with a fixed input word
void enumerate_outputs(const std::vector<std::string>& u, const std::vector<std::string>& gamma, int max_output,
                       const std::function<bool(const OGraph&)>& visit);

// Separate recursive semantics: predicates by explicit run enumeration.
bool oracle_holds(const Document& d, const OGraph& g, const PredicateTable& table);
bool oracle_holds(const F& f, const OGraph& g, const PredicateTable& table);
std::set<PosPair> oracle_pairs(const QueryAutomaton& q, const Word& u);

std::optional<OGraph> brute_sat(const Document& d, const PredicateTable& table, const EnumConfig& cfg);
std::vector<OGraph> brute_models(const Document& d, const PredicateTable& table, const std::vector<std::string>& u,
                                 int max_output = 4);
// input words (up to max_input) with at least one model of output length <= max_output
std::set<std::vector<std::string>> brute_domain(const Document& d, const PredicateTable& table, int max_input,
                                                int max_output);

// data words with the letters in order; all typed data words of length <= max_len
void enumerate_data_words(const std::vector<std::string>& gamma, const std::vector<std::string>& sigma,
                          int max_len, const std::function<bool(const TypedDataWord&)>& visit);
bool oracle_holds_ld(const F& f, const TypedDataWord& w, const PredicateTable& table);
std::optional<TypedDataWord> brute_sat_ld(const F& f, const PredicateTable& table,
                                          const std::vector<std::string>& gamma, int max_len);


} // namespace ltsynth
