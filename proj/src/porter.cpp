#include "featmatch/porter.hpp"

#include <array>
#include <cstddef>

// The classic Porter algorithm. A word is [C](VC)^m[V]; each step strips
// or rewrites the longest matching suffix whose measure condition holds.
// Within a step the longest matching suffix is binding: if its condition
// fails, no shorter suffix of that step is tried.

namespace featmatch::textnorm {

namespace {

class Stemmer {
public:
    explicit Stemmer(std::string word) : word_(std::move(word)) {}

    std::string run() {
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return word_;
    }

private:
    std::string word_;

    bool is_consonant(std::size_t i) const {
        switch (word_[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(i - 1);
        default:
            return true;
        }
    }

    // Measure m of word_[0, len): the VC repetition count.
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && is_consonant(i)) ++i;
        while (i < len) {
            while (i < len && !is_consonant(i)) ++i;
            if (i == len) break;
            ++m;
            while (i < len && is_consonant(i)) ++i;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i) {
            if (!is_consonant(i)) return true;
        }
        return false;
    }

    bool ends_double_consonant() const {
        auto n = word_.size();
        return n >= 2 && word_[n - 1] == word_[n - 2] && is_consonant(n - 1);
    }

    // *o: stem ends consonant-vowel-consonant, final consonant not w, x, y.
    bool ends_cvc(std::size_t len) const {
        if (len < 3) return false;
        char last = word_[len - 1];
        return is_consonant(len - 3) && !is_consonant(len - 2) && is_consonant(len - 1) &&
               last != 'w' && last != 'x' && last != 'y';
    }

    bool ends_with(std::string_view suffix) const {
        return word_.size() >= suffix.size() &&
               std::string_view(word_).substr(word_.size() - suffix.size()) == suffix;
    }

    std::size_t stem_len(std::string_view suffix) const { return word_.size() - suffix.size(); }

    void replace_suffix(std::string_view suffix, std::string_view with) {
        word_.resize(word_.size() - suffix.size());
        word_.append(with);
    }

    // Applies the first (longest) matching rule of a table; replacement
    // happens only when measure(stem) > min_measure.
    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    template <std::size_t N>
    void apply_table(const std::array<Rule, N>& rules, int min_measure) {
        for (const auto& rule : rules) {
            if (!ends_with(rule.suffix)) continue;
            if (measure(stem_len(rule.suffix)) > min_measure) {
                replace_suffix(rule.suffix, rule.replacement);
            }
            return;
        }
    }

    void step1a() {
        if (ends_with("sses")) {
            replace_suffix("sses", "ss");
        } else if (ends_with("ies")) {
            replace_suffix("ies", "i");
        } else if (ends_with("ss")) {
            // kept
        } else if (ends_with("s")) {
            word_.pop_back();
        }
    }

    void step1b() {
        if (ends_with("eed")) {
            if (measure(stem_len("eed")) > 0) word_.pop_back();
            return;
        }
        bool stripped = false;
        if (ends_with("ed") && has_vowel(stem_len("ed"))) {
            replace_suffix("ed", "");
            stripped = true;
        } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
            replace_suffix("ing", "");
            stripped = true;
        }
        if (!stripped) return;

        if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
            word_ += 'e';
        } else if (ends_double_consonant() && !ends_with("l") && !ends_with("s") &&
                   !ends_with("z")) {
            word_.pop_back();
        } else if (measure(word_.size()) == 1 && ends_cvc(word_.size())) {
            word_ += 'e';
        }
    }

    void step1c() {
        if (ends_with("y") && has_vowel(stem_len("y"))) {
            word_.back() = 'i';
        }
    }

    void step2() {
        static constexpr std::array<Rule, 20> rules{{
            {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"tional", "tion"}, {"biliti", "ble"},  {"ation", "ate"},
            {"alism", "al"},    {"aliti", "al"},    {"iviti", "ive"},   {"ousli", "ous"},
            {"entli", "ent"},   {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},     {"ator", "ate"},    {"eli", "e"},
        }};
        apply_table(rules, 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_table(rules, 0);
    }

    void step4() {
        static constexpr std::array<Rule, 18> rules{{
            {"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""}, {"ible", ""},
            {"ment", ""},  {"ant", ""},  {"ent", ""},  {"ism", ""},  {"ate", ""},
            {"iti", ""},   {"ous", ""},  {"ive", ""},  {"ize", ""},  {"ion", ""},
            {"al", ""},    {"er", ""},   {"ic", ""},   // "ou" handled below
        }};
        for (const auto& rule : rules) {
            if (!ends_with(rule.suffix)) continue;
            auto len = stem_len(rule.suffix);
            if (rule.suffix == "ion") {
                // (m>1 and (*S or *T)) ION ->
                if (measure(len) > 1 && len > 0 && (word_[len - 1] == 's' || word_[len - 1] == 't')) {
                    replace_suffix(rule.suffix, rule.replacement);
                }
            } else if (measure(len) > 1) {
                replace_suffix(rule.suffix, rule.replacement);
            }
            return;
        }
        if (ends_with("ou") && measure(stem_len("ou")) > 1) replace_suffix("ou", "");
    }

    void step5a() {
        if (!ends_with("e")) return;
        auto len = stem_len("e");
        int m = measure(len);
        if (m > 1 || (m == 1 && !ends_cvc(len))) word_.pop_back();
    }

    void step5b() {
        if (measure(word_.size()) > 1 && ends_double_consonant() && word_.back() == 'l') {
            word_.pop_back();
        }
    }
};

} // namespace

std::string porter_stem(std::string_view word) {
    if (word.size() <= 2) return std::string(word);
    for (char c : word) {
        if (c < 'a' || c > 'z') return std::string(word);
    }
    return Stemmer(std::string(word)).run();
}

} // namespace featmatch::textnorm
