#include "sgcl/caption_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sgcl/errors.hpp"

namespace sgcl {

namespace {

std::set<std::string> load_word_list(const std::string& path) {
    std::set<std::string> words;
    std::ifstream in(path);
    if (!in) return words;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        if (start < line.size()) words.insert(line.substr(start));
    }
    return words;
}

std::size_t phrase_tokens(const std::string& phrase) {
    return static_cast<std::size_t>(std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

}  // namespace

Lexicon Lexicon::load(const std::string& dir) {
    Lexicon lex;
    lex.determiners = load_word_list(dir + "/determiners.txt");
    lex.attributes = load_word_list(dir + "/attributes.txt");
    lex.relation_phrases = load_word_list(dir + "/relations.txt");
    for (const auto& p : lex.relation_phrases)
        lex.max_relation_tokens = std::max(lex.max_relation_tokens, phrase_tokens(p));
    return lex;
}

Lexicon Lexicon::from_lists(std::vector<std::string> determiners,
                            std::vector<std::string> attributes,
                            std::vector<std::string> relation_phrases) {
    Lexicon lex;
    lex.determiners.insert(determiners.begin(), determiners.end());
    lex.attributes.insert(attributes.begin(), attributes.end());
    lex.relation_phrases.insert(relation_phrases.begin(), relation_phrases.end());
    for (const auto& p : lex.relation_phrases)
        lex.max_relation_tokens = std::max(lex.max_relation_tokens, phrase_tokens(p));
    return lex;
}

std::vector<std::string> tokenize_caption(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '.': case ',': case '!': case '?': case ';': case ':':
            case '"': case '\'':
                break;  // stripped
            case '-':
                cleaned += ' ';  // hyphenated words split into tokens
                break;
            default:
                cleaned += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    std::vector<std::string> tokens;
    std::istringstream stream(cleaned);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

SceneGraph parse_caption(const std::string& text, const Lexicon& lex) {
    const auto tokens = tokenize_caption(text);

    SceneGraph g;
    int next_object = 0;
    int next_attr = 0;
    int next_rel = 0;

    std::vector<std::string> pending_attrs;  // ADJ tokens of the current NP
    std::vector<std::string> noun_tokens;    // compound tokens, last one is the head
    std::string pending_rel;                 // REL waiting for its right-hand NP
    int prev_object = -1;

    auto finalize_np = [&]() {
        ObjectNode o;
        o.id = next_object++;
        o.head = noun_tokens.back();
        o.modifiers.assign(noun_tokens.begin(), noun_tokens.end() - 1);
        g.objects.push_back(o);
        for (const auto& value : pending_attrs)
            g.attributes.push_back({next_attr++, value, o.id});
        if (!pending_rel.empty()) {
            g.relations.push_back({next_rel++, pending_rel, prev_object, o.id});
            pending_rel.clear();
        }
        prev_object = o.id;
        pending_attrs.clear();
        noun_tokens.clear();
    };

    std::size_t i = 0;
    while (i < tokens.size()) {
        // A relation can only close an NP that already has a head candidate.
        if (!noun_tokens.empty()) {
            std::size_t matched = 0;
            std::string phrase;
            const std::size_t limit = std::min(lex.max_relation_tokens, tokens.size() - i);
            for (std::size_t len = limit; len >= 1; --len) {  // greedy longest match
                std::string candidate = tokens[i];
                for (std::size_t k = 1; k < len; ++k) candidate += ' ' + tokens[i + k];
                if (lex.relation_phrases.count(candidate)) {
                    matched = len;
                    phrase = candidate;
                    break;
                }
            }
            if (matched > 0) {
                finalize_np();
                pending_rel = phrase;
                i += matched;
                continue;
            }
        }
        const std::string& token = tokens[i];
        if (lex.determiners.count(token)) {
            // determiners are dropped wherever they occur
        } else if (lex.attributes.count(token)) {
            pending_attrs.push_back(token);
        } else {
            noun_tokens.push_back(token);
        }
        ++i;
    }

    if (!noun_tokens.empty()) {
        finalize_np();
    } else if (!pending_rel.empty()) {
        throw UnknownStructure("relation '" + pending_rel + "' has no following noun phrase");
    }
    // Trailing attribute tokens with no following object are dropped.

    if (g.objects.empty()) throw ParseError("no object token found in caption");
    g.validate();
    return g;
}

}  // namespace sgcl
