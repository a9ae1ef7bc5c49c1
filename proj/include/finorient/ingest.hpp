#ifndef FINORIENT_INGEST_HPP
#define FINORIENT_INGEST_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "finorient/pos.hpp"

namespace finorient {

struct Token {
  std::string surface;
  std::string lower;  // ASCII case-fold of surface
  Pos pos = Pos::Other;
  std::size_t begin = 0;  // char offsets into the sentence text
  std::size_t end = 0;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
};

// Splits one sentence into tokens with exact character spans. Numbers keep
// internal decimal separators and a directly attached '%'; hyphens act as
// separators and are dropped; an apostrophe between letters stays inside
// the word; any other punctuation char is its own token.
std::vector<Token> tokenize(std::string_view text);

class Tagger {
public:
  virtual ~Tagger() = default;
  virtual void tag(Sentence& s) const = 0;
};

// Deterministic tagger: digit rule, closed word lists, caller-supplied
// hints, then suffix heuristics; everything else falls back to OTHER.
class HeuristicTagger : public Tagger {
public:
  HeuristicTagger();
  void add_hint(std::string word, Pos pos);
  void add_hints(const std::unordered_map<std::string, Pos>& hints);
  Pos classify(const Token& t) const;
  void tag(Sentence& s) const override;

private:
  std::unordered_map<std::string, Pos> words_;
  std::unordered_map<std::string, Pos> hints_;
};

// Leaves existing tags untouched (pre-tagged input path).
class PassthroughTagger : public Tagger {
public:
  void tag(Sentence&) const override {}
};

Sentence make_sentence(std::string id, std::string text, const Tagger& tagger);

// Reads the token-per-line format: "surface<TAB>TAG", blank line between
// sentences, optional "# id = <name>" line before a sentence. Sentences
// without an id line get sequential ids s1, s2, ...
std::vector<Sentence> load_tagged(std::istream& in,
                                  const std::string& source_name = "<stream>");

void write_tagged(std::span<const Sentence> sentences, std::ostream& out);

}  // namespace finorient

#endif
