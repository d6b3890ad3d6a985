#pragma once

#include <set>
#include <string>
#include <vector>

#include "sgcl/scene_graph.hpp"

namespace sgcl {

// Vocabulary driving the rule-based grammar. Loaded from plain-text files,
// one lowercase entry per line, '#' comments allowed.
struct Lexicon {
    std::set<std::string> determiners;
    std::set<std::string> attributes;
    std::set<std::string> relation_phrases;  // 1-3 token phrases
    std::size_t max_relation_tokens = 1;

    static Lexicon load(const std::string& dir);  // determiners.txt etc., missing files allowed
    static Lexicon from_lists(std::vector<std::string> determiners,
                              std::vector<std::string> attributes,
                              std::vector<std::string> relation_phrases);
};

// Lowercase, strip .,!?;:"' and split hyphens, then apply
//   caption := NP (REL NP)*        NP := DET? (ADJ | NOUN)+
// REL is a greedy longest match against lexicon relation phrases, DET tokens
// are dropped, ADJ tokens (lexicon attributes) become attribute nodes on the
// enclosing NP's object, and the remaining tokens form one compound object
// whose last token is the head.
// Throws ParseError when no object token is found and UnknownStructure when a
// matched REL has no following NP.
SceneGraph parse_caption(const std::string& text, const Lexicon& lex);

std::vector<std::string> tokenize_caption(const std::string& text);

}  // namespace sgcl
