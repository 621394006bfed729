#include <doctest.h>

#include "featmatch/porter.hpp"

#include <string>
#include <vector>

using featmatch::textnorm::porter_stem;

TEST_CASE("porter maps the documented word-form examples") {
    CHECK(porter_stem("pointing") == "point");
    CHECK(porter_stem("swimming") == "swim");
    CHECK(porter_stem("friends") == "friend");
    CHECK(porter_stem("price") == "price");
}

TEST_CASE("porter sends released and release to the same stem") {
    CHECK(porter_stem("released") == "releas");
    CHECK(porter_stem("release") == "releas");
}

TEST_CASE("porter classic suffix tables") {
    // Step 1
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("caress") == "caress");
    CHECK(porter_stem("cats") == "cat");
    CHECK(porter_stem("feed") == "feed");
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("plastered") == "plaster");
    CHECK(porter_stem("bled") == "bled");
    CHECK(porter_stem("motoring") == "motor");
    CHECK(porter_stem("sing") == "sing");
    CHECK(porter_stem("conflated") == "conflat");
    CHECK(porter_stem("troubled") == "troubl");
    CHECK(porter_stem("sized") == "size");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("tanned") == "tan");
    CHECK(porter_stem("falling") == "fall");
    CHECK(porter_stem("hissing") == "hiss");
    CHECK(porter_stem("fizzed") == "fizz");
    CHECK(porter_stem("failing") == "fail");
    CHECK(porter_stem("filing") == "file");
    CHECK(porter_stem("happy") == "happi");
    CHECK(porter_stem("sky") == "sky");

    // Step 2
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("conditional") == "condit");
    CHECK(porter_stem("valenci") == "valenc");
    CHECK(porter_stem("digitizer") == "digit");
    CHECK(porter_stem("operator") == "oper");

    // Steps 3-5
    CHECK(porter_stem("triplicate") == "triplic");
    CHECK(porter_stem("formative") == "form");
    CHECK(porter_stem("electrical") == "electr");
    CHECK(porter_stem("hopefulness") == "hope");
    CHECK(porter_stem("goodness") == "good");
    CHECK(porter_stem("revival") == "reviv");
    CHECK(porter_stem("allowance") == "allow");
    CHECK(porter_stem("inference") == "infer");
    CHECK(porter_stem("replacement") == "replac");
    CHECK(porter_stem("adjustment") == "adjust");
    CHECK(porter_stem("dependent") == "depend");
    CHECK(porter_stem("adoption") == "adopt");
    CHECK(porter_stem("communism") == "commun");
    CHECK(porter_stem("activate") == "activ");
    CHECK(porter_stem("effective") == "effect");
    CHECK(porter_stem("rate") == "rate");
    CHECK(porter_stem("cease") == "ceas");
    CHECK(porter_stem("controll") == "control");
    CHECK(porter_stem("roll") == "roll");
}

TEST_CASE("porter leaves short and non-alphabetic tokens alone") {
    CHECK(porter_stem("ai") == "ai");
    CHECK(porter_stem("go") == "go");
    CHECK(porter_stem("living15") == "living15");
    CHECK(porter_stem("") == "");
}

// Stems ending in a bare s ("releas") lose it on a second pass, so
// stability is a per-corpus property, not a universal one. This corpus
// is the vocabulary the fixtures and documented examples exercise,
// minus those known re-stemming cases.
TEST_CASE("porter is stable on its own output over the working corpus") {
    const std::vector<std::string> corpus = {
        "pointing", "swimming", "friends",  "rating",      "listed",   "series",
        "title",    "overview", "description", "price",    "bedrooms", "suburb",
        "director", "condition", "yrbuilt", "yearly",      "values",   "features",
        "matching", "lemmatization", "similarity", "weighted", "average", "type",
    };
    for (const auto& word : corpus) {
        auto once = porter_stem(word);
        CAPTURE(word);
        CHECK(porter_stem(once) == once);
    }
}
