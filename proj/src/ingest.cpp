#include "finorient/ingest.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "finorient/errors.hpp"

namespace finorient {

namespace {

bool is_word_byte(unsigned char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 word characters.
  return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c) != 0 || c == '-') {  // hyphens split and vanish
      ++i;
      continue;
    }
    std::size_t begin = i;
    if (is_digit(c)) {
      ++i;
      while (i < n) {
        const unsigned char d = static_cast<unsigned char>(text[i]);
        if (is_digit(d)) {
          ++i;
        } else if ((d == '.' || d == ',') && i + 1 < n &&
                   is_digit(static_cast<unsigned char>(text[i + 1]))) {
          i += 2;
        } else {
          break;
        }
      }
      if (i < n && text[i] == '%') ++i;
    } else if (is_word_byte(c)) {
      ++i;
      while (i < n) {
        const unsigned char d = static_cast<unsigned char>(text[i]);
        if (is_word_byte(d)) {
          ++i;
        } else if (d == '\'' && i + 1 < n &&
                   is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
          i += 2;
        } else {
          break;
        }
      }
    } else {
      ++i;  // single punctuation character
    }
    Token t;
    t.surface = std::string(text.substr(begin, i - begin));
    t.lower = ascii_lower(t.surface);
    t.begin = begin;
    t.end = i;
    tokens.push_back(std::move(t));
  }
  return tokens;
}

namespace {

struct WordList {
  Pos pos;
  const char* words;
};

// Closed lists for the deterministic tagger. Kept small on purpose; the
// suffix rules and caller hints carry the rest.
const WordList kWordLists[] = {
    {Pos::Part,
     "the a an of in on at by for with from to as and or but nor that this these "
     "those which who whom whose if while than then so such per via over under "
     "between during until within without into onto about against towards toward "
     "after before since despite although though because it he she they we i you "
     "its their his her our your my me him them us there here when where how what "
     "up down off out not no also both either neither each every any some all "
     "been being be am is are was were"},
    {Pos::Verb,
     "has have had having do does did done will would can could may might must "
     "shall should rose rise rises risen rising fell fall falls fallen falling "
     "increase increased increases increasing decrease decreased decreases "
     "decreasing grew grow grows grown growing decline declined declines "
     "declining drop dropped drops dropping gained gains jump jumped surge "
     "surged soar soared climb climbed plunge plunged plummet plummeted slump "
     "slumped improve improved improves expand expanded widen widened narrow "
     "narrowed shrink shrank shrunk double doubled halve halved cut cuts report "
     "reported reports announce announced announces expect expects expected "
     "estimate estimated remain remained remains total totalled totaled amounted "
     "amount said says say sell sold sells buy bought buys pay paid pays make "
     "made makes take took taken get got gets go went gone come came comes keep "
     "kept sign signed signs win won wins lose lost loses rocket rocketed "
     "balloon ballooned boost boosted strengthen strengthened weaken weakened "
     "slow slowed ease eased speed speeded sank sink sunk slid slide slides "
     "reduce reduced reduces lower lowered advance advanced accelerate "
     "accelerated deliver delivered delivers open opened opens close closed "
     "closes start started starts end ended ends see saw seen show showed shown "
     "use used uses provide provided provides include included includes"},
    {Pos::Noun,
     "profit profits loss losses sales revenue revenues earnings income turnover "
     "margin margins cost costs expense expenses share shares stock stocks price "
     "prices market markets company companies group quarter year period eps ebit "
     "ebitda dividend dividends debt liability liabilities asset assets cash "
     "flow order orders demand production output capacity employee employees "
     "staff operation operations contract contracts agreement deal unit units "
     "business result results forecast outlook guidance plant factory product "
     "products service services customer customers client clients mn million "
     "billion eur usd euro euros dollar dollars percent unemployment inflation "
     "deficit investment investments bank banks number errors error collection "
     "lawsuit litigation court settlement plaintiff defendant arbitration appeal "
     "uncertainty volatility risk risks doubt doubts backlog bookings deliveries "
     "shipments exports imports volume volumes productivity efficiency "
     "utilization impairment writedown writedowns provision provisions "
     "redundancies layoffs"},
    {Pos::Adj,
     "good bad strong weak high low higher lower new net gross operating "
     "financial fiscal annual quarterly positive negative neutral major minor "
     "significant big small large profitable unprofitable favorable unfavorable "
     "difficult adverse poor excellent great solid robust healthy uncertain "
     "unclear volatile unpredictable speculative litigious third second first "
     "fourth last next previous current corresponding accounting"},
    {Pos::Adv,
     "considerably significantly slightly approximately nearly well strongly "
     "sharply substantially markedly moderately somewhat clearly notably roughly "
     "very quite almost too now today yesterday respectively mainly"},
};

}  // namespace

HeuristicTagger::HeuristicTagger() {
  for (const auto& list : kWordLists) {
    std::istringstream words(list.words);
    std::string w;
    while (words >> w) words_[w] = list.pos;
  }
}

void HeuristicTagger::add_hint(std::string word, Pos pos) {
  hints_[std::move(word)] = pos;
}

void HeuristicTagger::add_hints(const std::unordered_map<std::string, Pos>& hints) {
  for (const auto& [word, pos] : hints) hints_[word] = pos;
}

Pos HeuristicTagger::classify(const Token& t) const {
  const std::string& w = t.lower;
  if (w.empty()) return Pos::Other;
  if (is_digit(static_cast<unsigned char>(w.front()))) return Pos::Num;
  if (auto it = words_.find(w); it != words_.end()) return it->second;
  if (auto it = hints_.find(w); it != hints_.end()) return it->second;
  auto ends_with = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with("ly")) return Pos::Adv;
  if (ends_with("ing") || ends_with("ed")) return Pos::Verb;
  if (ends_with("tion") || ends_with("sion") || ends_with("ment") ||
      ends_with("ness") || ends_with("ship") || ends_with("ity")) {
    return Pos::Noun;
  }
  if (ends_with("ous") || ends_with("ful") || ends_with("ive") ||
      ends_with("able") || ends_with("ible") || ends_with("ic")) {
    return Pos::Adj;
  }
  return Pos::Other;  // punctuation and unknown words
}

void HeuristicTagger::tag(Sentence& s) const {
  for (Token& t : s.tokens) t.pos = classify(t);
}

Sentence make_sentence(std::string id, std::string text, const Tagger& tagger) {
  Sentence s;
  s.id = std::move(id);
  s.text = std::move(text);
  s.tokens = tokenize(s.text);
  tagger.tag(s);
  return s;
}

namespace {

// Rebuilds text and spans from bare surfaces, one space between tokens.
void finish_sentence(Sentence& s) {
  std::string text;
  for (Token& t : s.tokens) {
    if (!text.empty()) text += ' ';
    t.begin = text.size();
    text += t.surface;
    t.end = text.size();
  }
  s.text = std::move(text);
}

}  // namespace

std::vector<Sentence> load_tagged(std::istream& in, const std::string& source_name) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string pending_id;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    current.id = pending_id.empty()
                     ? "s" + std::to_string(sentences.size() + 1)
                     : pending_id;
    pending_id.clear();
    finish_sentence(current);
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      static constexpr std::string_view kIdPrefix = "# id =";
      if (line.compare(0, kIdPrefix.size(), kIdPrefix) == 0) {
        std::size_t p = kIdPrefix.size();
        while (p < line.size() && line[p] == ' ') ++p;
        pending_id = line.substr(p);
      }
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw parse_error(source_name, line_no,
                        "expected exactly 2 tab-separated fields");
    }
    const std::string surface = line.substr(0, tab);
    const std::string tag_name = line.substr(tab + 1);
    if (surface.empty()) {
      throw parse_error(source_name, line_no, "empty token surface");
    }
    const auto pos = parse_pos(tag_name);
    if (!pos) {
      throw parse_error(source_name, line_no, "unknown tag '" + tag_name + "'");
    }
    Token t;
    t.surface = surface;
    t.lower = ascii_lower(surface);
    t.pos = *pos;
    current.tokens.push_back(std::move(t));
  }
  flush();  // EOF without a trailing blank line is fine
  return sentences;
}

void write_tagged(std::span<const Sentence> sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    out << "# id = " << s.id << "\n";
    for (const Token& t : s.tokens) {
      out << t.surface << '\t' << to_string(t.pos) << "\n";
    }
    out << "\n";
  }
}

}  // namespace finorient
