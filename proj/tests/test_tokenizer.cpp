#include <doctest.h>

#include "nfa/tokenizer.hpp"

using nfa::tokenize;

TEST_CASE("tokenize lowercases, splits, and drops stopwords") {
    nfa::StopwordSet stop = {"and", "in", "of", "the", "at", "with", "no"};
    CHECK(tokenize("data in computer's Algorithm", stop) ==
          std::vector<std::string>{"data", "computer", "algorithm"});
    CHECK(tokenize("data and space", stop) == std::vector<std::string>{"data", "space"});
    CHECK(tokenize("", stop).empty());
}

TEST_CASE("possessive apostrophe-s is stripped only at a token boundary") {
    nfa::StopwordSet none;
    CHECK(tokenize("audience's joy", none) == std::vector<std::string>{"audience", "joy"});
    CHECK(tokenize("computer's", none) == std::vector<std::string>{"computer"});
    CHECK(tokenize("it's", none) == std::vector<std::string>{"it"});
    // Not a possessive: 's' continues into more word characters.
    CHECK(tokenize("o'sullivan", none) == std::vector<std::string>{"o", "sullivan"});
}

TEST_CASE("order and multiplicity are preserved") {
    nfa::StopwordSet none;
    CHECK(tokenize("b a b", none) == std::vector<std::string>{"b", "a", "b"});
    CHECK(tokenize("x1/y2,z3", none) == std::vector<std::string>{"x1", "y2", "z3"});
}

TEST_CASE("default stopword list") {
    CHECK(tokenize("the cat and an owl at a tree") == std::vector<std::string>{"cat", "owl", "tree"});
}
