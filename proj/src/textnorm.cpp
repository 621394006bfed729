#include "featmatch/textnorm.hpp"

#include "featmatch/errors.hpp"
#include "featmatch/porter.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace featmatch::textnorm {

Lemmatizer parse_lemmatizer(std::string_view text) {
    if (text == "porter") return Lemmatizer::porter;
    if (text == "none") return Lemmatizer::none;
    throw ConfigError("textnorm: unknown lemmatizer '" + std::string(text) + "'");
}

std::string_view to_string(Lemmatizer lemmatizer) {
    return lemmatizer == Lemmatizer::porter ? "porter" : "none";
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",   "the",  "is",    "are",  "as",   "was",  "were", "be",
        "been", "being", "it",  "its",   "of",   "to",   "in",   "on",   "for",
        "and",  "or",   "has",  "have",  "had",  "our",  "your", "their", "this",
        "that", "with", "by",   "from",  "at",   "always",
    };
    return words;
}

std::set<std::string> load_stopwords_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UnreadableSource("textnorm: cannot open stopword file " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos || line[begin] == '#') continue;
        auto end = line.find_last_not_of(" \t");
        auto word = line.substr(begin, end - begin + 1);
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.insert(std::move(word));
    }
    return words;
}

TokenSet TokenSet::from_tokens(const std::vector<std::string>& raw) {
    TokenSet set;
    set.tokens = raw;
    std::sort(set.tokens.begin(), set.tokens.end());
    set.tokens.erase(std::unique(set.tokens.begin(), set.tokens.end()), set.tokens.end());
    return set;
}

bool TokenSet::contains(std::string_view token) const {
    return std::binary_search(tokens.begin(), tokens.end(), token);
}

namespace {

// ASCII base letter for common accented Latin code points; empty view
// means "no trivial mapping" and the character is dropped.
std::string_view transliterate(char32_t cp) {
    switch (cp) {
    case U'À': case U'Á': case U'Â': case U'Ã': case U'Ä': case U'Å':
    case U'à': case U'á': case U'â': case U'ã': case U'ä': case U'å':
    case U'Ā': case U'ā': case U'Ă': case U'ă': case U'Ą': case U'ą':
        return "a";
    case U'Ç': case U'ç': case U'Ć': case U'ć': case U'Ĉ': case U'ĉ':
    case U'Ċ': case U'ċ': case U'Č': case U'č':
        return "c";
    case U'Ď': case U'ď': case U'Đ': case U'đ': case U'Ð': case U'ð':
        return "d";
    case U'È': case U'É': case U'Ê': case U'Ë':
    case U'è': case U'é': case U'ê': case U'ë':
    case U'Ē': case U'ē': case U'Ĕ': case U'ĕ': case U'Ė': case U'ė':
    case U'Ę': case U'ę': case U'Ě': case U'ě':
        return "e";
    case U'Ĝ': case U'ĝ': case U'Ğ': case U'ğ': case U'Ġ': case U'ġ':
    case U'Ģ': case U'ģ':
        return "g";
    case U'Ĥ': case U'ĥ': case U'Ħ': case U'ħ':
        return "h";
    case U'Ì': case U'Í': case U'Î': case U'Ï':
    case U'ì': case U'í': case U'î': case U'ï':
    case U'Ĩ': case U'ĩ': case U'Ī': case U'ī': case U'Ĭ': case U'ĭ':
    case U'Į': case U'į': case U'İ': case U'ı':
        return "i";
    case U'Ĵ': case U'ĵ':
        return "j";
    case U'Ķ': case U'ķ':
        return "k";
    case U'Ĺ': case U'ĺ': case U'Ļ': case U'ļ': case U'Ľ': case U'ľ':
    case U'Ŀ': case U'ŀ': case U'Ł': case U'ł':
        return "l";
    case U'Ñ': case U'ñ': case U'Ń': case U'ń': case U'Ņ': case U'ņ':
    case U'Ň': case U'ň':
        return "n";
    case U'Ò': case U'Ó': case U'Ô': case U'Õ': case U'Ö': case U'Ø':
    case U'ò': case U'ó': case U'ô': case U'õ': case U'ö': case U'ø':
    case U'Ō': case U'ō': case U'Ŏ': case U'ŏ': case U'Ő': case U'ő':
        return "o";
    case U'Ŕ': case U'ŕ': case U'Ŗ': case U'ŗ': case U'Ř': case U'ř':
        return "r";
    case U'Ś': case U'ś': case U'Ŝ': case U'ŝ': case U'Ş': case U'ş':
    case U'Š': case U'š':
        return "s";
    case U'ß':
        return "ss";
    case U'Ţ': case U'ţ': case U'Ť': case U'ť': case U'Ŧ': case U'ŧ':
        return "t";
    case U'Þ': case U'þ':
        return "th";
    case U'Ù': case U'Ú': case U'Û': case U'Ü':
    case U'ù': case U'ú': case U'û': case U'ü':
    case U'Ũ': case U'ũ': case U'Ū': case U'ū': case U'Ŭ': case U'ŭ':
    case U'Ů': case U'ů': case U'Ű': case U'ű': case U'Ų': case U'ų':
        return "u";
    case U'Ŵ': case U'ŵ':
        return "w";
    case U'Ý': case U'ý': case U'ÿ': case U'Ŷ': case U'ŷ': case U'Ÿ':
        return "y";
    case U'Ź': case U'ź': case U'Ż': case U'ż': case U'Ž': case U'ž':
        return "z";
    case U'Æ': case U'æ':
        return "ae";
    case U'Œ': case U'œ':
        return "oe";
    default:
        return {};
    }
}

// Decodes one UTF-8 code point starting at i; advances i past it.
// Malformed sequences consume one byte and yield U+FFFD.
char32_t decode_utf8(std::string_view text, std::size_t& i) {
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    unsigned char lead = byte(i);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
        ++i;
        return lead;
    } else if ((lead >> 5) == 0x6) {
        len = 2;
        cp = lead & 0x1f;
    } else if ((lead >> 4) == 0xe) {
        len = 3;
        cp = lead & 0x0f;
    } else if ((lead >> 3) == 0x1e) {
        len = 4;
        cp = lead & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + len > text.size()) {
        ++i;
        return 0xFFFD;
    }
    for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xc0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (byte(i + k) & 0x3f);
    }
    i += len;
    return cp;
}

} // namespace

std::string sanitize(std::string_view text, bool keep_digits) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;

    auto push = [&](char c) {
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += c;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            ++i;
            if (c >= 'a' && c <= 'z') {
                push(static_cast<char>(c));
            } else if (c >= 'A' && c <= 'Z') {
                push(static_cast<char>(c - 'A' + 'a'));
            } else if (c >= '0' && c <= '9' && keep_digits) {
                push(static_cast<char>(c));
            } else {
                pending_space = true;
            }
            continue;
        }
        char32_t cp = decode_utf8(text, i);
        auto mapped = transliterate(cp);
        if (mapped.empty()) {
            pending_space = true;
        } else {
            for (char m : mapped) push(m);
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start < text.size()) {
        while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) {
            ++start;
        }
        auto end = start;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) {
            ++end;
        }
        if (end > start) tokens.emplace_back(text.substr(start, end - start));
        start = end;
    }
    return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const NormConfig& config) {
    std::erase_if(tokens, [&](const std::string& t) { return config.stopwords.contains(t); });
    return tokens;
}

std::string lemmatize(const std::string& token, const NormConfig& config) {
    if (auto it = config.lemma_exceptions.find(token); it != config.lemma_exceptions.end()) {
        return it->second;
    }
    if (config.lemmatizer == Lemmatizer::none) return token;
    return porter_stem(token);
}

NormalizedFeature normalize(const ingest::ComposedText& composed, const NormConfig& config) {
    NormalizedFeature feature;
    feature.composed = composed;

    auto sanitized = sanitize(composed.text, config.keep_digits);
    auto tokens = remove_stopwords(tokenize(sanitized), config);
    std::vector<std::string> lemmas;
    lemmas.reserve(tokens.size());
    for (const auto& token : tokens) lemmas.push_back(lemmatize(token, config));

    feature.token_set = TokenSet::from_tokens(lemmas);

    if (config.embed_raw) {
        feature.embedding_text = sanitized;
    } else {
        std::string joined;
        for (std::size_t i = 0; i < lemmas.size(); ++i) {
            if (i) joined += ' ';
            joined += lemmas[i];
        }
        feature.embedding_text = std::move(joined);
    }
    return feature;
}

} // namespace featmatch::textnorm
