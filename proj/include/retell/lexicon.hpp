// Copyright 2026 The Retell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Word list with irregular forms, plus the regular English inflection rules
// used when a form is not listed.
//
// File format (UTF-8): one entry per line,
//   lexeme <TAB> class [<TAB> key=value,key=value,...]
// Blank lines and lines starting with '#' are ignored. Verb keys: past,
// past_participle, third_sg, past_pl, pres_1sg, pres_pl. Noun keys: plural,
// gender (masc|fem|neut). Pronoun keys: <case>.<number>.<person>, e.g.
// subject.sg.1st=I, where case is subject|object|possessive_det|reflexive.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retell/dsynts.hpp"
#include "retell/error.hpp"

namespace retell {

enum class CaseRole { subject, object, possessive_det, reflexive };

inline std::string_view to_string(CaseRole c) {
  switch (c) {
    case CaseRole::subject: return "subject";
    case CaseRole::object: return "object";
    case CaseRole::possessive_det: return "possessive_det";
    case CaseRole::reflexive: return "reflexive";
  }
  return "?";
}

struct LexiconEntry {
  std::string lexeme;
  WordClass word_class = WordClass::common_noun;
  std::map<std::string, std::string> forms;

  std::optional<std::string> form(std::string_view key) const {
    auto it = forms.find(std::string(key));
    if (it == forms.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> pronoun_form(CaseRole c, Number n, Person p) const {
    return form(std::string(to_string(c)) + "." + std::string(to_string(n)) + "." +
                std::string(to_string(p)));
  }
};

class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon parse(std::string_view text) {
    Lexicon lex;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      lex.add(parse_line(line, line_no));
      if (end == text.size()) break;
    }
    return lex;
  }

  static Lexicon load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read lexicon " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      return parse(ss.str());
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.message(), e.line(), e.column());
    }
  }

  // Later entries for the same (lexeme, class) replace earlier ones.
  void add(LexiconEntry entry) {
    auto key = std::make_pair(entry.lexeme, entry.word_class);
    entries_[key] = std::move(entry);
  }

  const LexiconEntry* find(std::string_view lexeme, WordClass wc) const {
    auto it = entries_.find(std::make_pair(std::string(lexeme), wc));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, WordClass>, LexiconEntry> entries_;

  static bool known_key(WordClass wc, std::string_view key) {
    static constexpr std::string_view kVerbKeys[] = {"past", "past_participle", "third_sg",
                                                     "past_pl", "pres_1sg", "pres_pl"};
    static constexpr std::string_view kNounKeys[] = {"plural", "gender"};
    if (wc == WordClass::verb) {
      for (auto k : kVerbKeys)
        if (k == key) return true;
      return false;
    }
    if (wc == WordClass::common_noun || wc == WordClass::proper_noun) {
      for (auto k : kNounKeys)
        if (k == key) return true;
      return false;
    }
    if (wc == WordClass::pronoun) {
      auto d1 = key.find('.');
      auto d2 = key.rfind('.');
      if (d1 == std::string_view::npos || d1 == d2) return false;
      auto c = key.substr(0, d1);
      auto n = key.substr(d1 + 1, d2 - d1 - 1);
      auto p = key.substr(d2 + 1);
      bool case_ok = c == "subject" || c == "object" || c == "possessive_det" || c == "reflexive";
      return case_ok && detail::value_of(detail::kNumberNames, n) &&
             detail::value_of(detail::kPersonNames, p);
    }
    return false;
  }

  static LexiconEntry parse_line(std::string_view line, int line_no) {
    std::vector<std::string_view> cols;
    std::size_t s = 0;
    for (;;) {
      auto tab = line.find('\t', s);
      cols.push_back(line.substr(s, tab == std::string_view::npos ? std::string_view::npos : tab - s));
      if (tab == std::string_view::npos) break;
      s = tab + 1;
    }
    auto column_of = [&](std::size_t col) {
      int c = 1;
      for (std::size_t i = 0; i < col; ++i) c += static_cast<int>(cols[i].size()) + 1;
      return c;
    };
    if (cols.size() < 2 || cols.size() > 3)
      throw ParseError("expected lexeme<TAB>class[<TAB>forms]", line_no, 1);
    LexiconEntry e;
    e.lexeme = std::string(cols[0]);
    if (e.lexeme.empty()) throw ParseError("empty lexeme", line_no, 1);
    auto wc = parse_word_class(cols[1]);
    if (!wc) throw ParseError("unknown class '" + std::string(cols[1]) + "'", line_no, column_of(1));
    e.word_class = *wc;
    if (cols.size() == 3 && !cols[2].empty()) {
      std::string_view rest = cols[2];
      std::size_t p = 0;
      while (p <= rest.size()) {
        auto comma = rest.find(',', p);
        std::string_view kv = rest.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p);
        int col = column_of(2) + static_cast<int>(p);
        auto eq = kv.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == kv.size())
          throw ParseError("expected key=value, got '" + std::string(kv) + "'", line_no, col);
        std::string key(kv.substr(0, eq));
        if (!known_key(e.word_class, key))
          throw ParseError("unknown form key '" + key + "' for class " + std::string(cols[1]), line_no, col);
        e.forms[key] = std::string(kv.substr(eq + 1));
        if (comma == std::string_view::npos) break;
        p = comma + 1;
      }
    }
    return e;
  }
};

// ---------------------------------------------------------------------------
// Inflection

struct Features {
  std::optional<Tense> tense;
  Person person = Person::third;
  Number number = Number::sg;
};

namespace detail {

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline int vowel_groups(std::string_view w) {
  int groups = 0;
  bool in = false;
  for (char c : w) {
    bool v = is_vowel(c) || (c == 'y' && in);
    if (v && !in) ++groups;
    in = v;
  }
  return groups;
}

// Monosyllables ending consonant-vowel-consonant double the final consonant
// (stop, slip); w, x and y never double.
inline bool doubles_final(std::string_view w) {
  if (w.size() < 3) return false;
  char last = w[w.size() - 1], mid = w[w.size() - 2], before = w[w.size() - 3];
  if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
  if (!is_vowel(mid) || is_vowel(before)) return false;
  return vowel_groups(w) == 1;
}

inline bool sibilant_end(std::string_view w) {
  return w.ends_with("s") || w.ends_with("x") || w.ends_with("z") || w.ends_with("ch") ||
         w.ends_with("sh");
}

inline bool consonant_y(std::string_view w) {
  return w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2]);
}

inline std::string surface(std::string_view lexeme) {
  std::string s(lexeme);
  for (char& c : s)
    if (c == '_') c = ' ';
  return s;
}

}  // namespace detail

inline std::string regular_past(std::string_view stem) {
  std::string w(stem);
  if (w.ends_with("e")) return w + "d";
  if (detail::consonant_y(w)) return w.substr(0, w.size() - 1) + "ied";
  if (detail::doubles_final(w)) return w + w.back() + "ed";
  return w + "ed";
}

inline std::string regular_third_sg(std::string_view stem) {
  std::string w(stem);
  if (detail::consonant_y(w)) return w.substr(0, w.size() - 1) + "ies";
  if (detail::sibilant_end(w) || w.ends_with("o")) return w + "es";
  return w + "s";
}

inline std::string regular_plural(std::string_view stem) {
  std::string w(stem);
  if (detail::consonant_y(w)) return w.substr(0, w.size() - 1) + "ies";
  if (detail::sibilant_end(w)) return w + "es";
  return w + "s";
}

// Verbs: finite forms agree with person/number; inf-to yields "to <stem>".
// Nouns: plural when number is pl. Multi-word lexemes inflect their last word.
inline std::string inflect(const LexiconEntry& entry, const Features& f) {
  const std::string stem = detail::surface(entry.lexeme);
  auto fail = [&](const std::string& why) -> std::string {
    throw InflectionError("cannot inflect '" + entry.lexeme + "' (" +
                          std::string(to_string(entry.word_class)) + "): " + why);
  };
  auto on_last_word = [&](auto rule) {
    auto sp = stem.rfind(' ');
    if (sp == std::string::npos) return rule(stem);
    return stem.substr(0, sp + 1) + rule(stem.substr(sp + 1));
  };

  if (entry.word_class == WordClass::verb) {
    if (!f.tense) return fail("verb without tense");
    const bool third_sg = f.person == Person::third && f.number == Number::sg;
    const bool first_sg = f.person == Person::first && f.number == Number::sg;
    switch (*f.tense) {
      case Tense::inf_to:
        return "to " + stem;
      case Tense::fut:
        return "will " + stem;
      case Tense::past:
        if (auto pl = entry.form("past_pl"); pl && (f.number == Number::pl || f.person == Person::second))
          return *pl;
        if (auto p = entry.form("past")) return *p;
        return on_last_word([](const std::string& w) { return regular_past(w); });
      case Tense::pres:
        if (third_sg) {
          if (auto p = entry.form("third_sg")) return *p;
          return on_last_word([](const std::string& w) { return regular_third_sg(w); });
        }
        if (first_sg)
          if (auto p = entry.form("pres_1sg")) return *p;
        if (auto p = entry.form("pres_pl")) return *p;
        return stem;
    }
    return fail("unknown tense");
  }
  if (entry.word_class == WordClass::common_noun || entry.word_class == WordClass::proper_noun) {
    if (f.tense) return fail("noun with tense");
    if (f.number == Number::sg) return stem;
    if (auto p = entry.form("plural")) return *p;
    return on_last_word([](const std::string& w) { return regular_plural(w); });
  }
  return fail("only verbs and nouns inflect");
}

}  // namespace retell
