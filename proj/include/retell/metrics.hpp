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

// Text similarity measures for comparing a retelling with a reference:
// character-level Levenshtein distance and single-reference, unsmoothed BLEU.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace retell {

// Edit distance with unit-cost insertion, deletion and substitution over any
// pair of random-access sequences with comparable elements.
template <class SeqA, class SeqB>
std::size_t levenshtein_distance(const SeqA& a, const SeqB& b) {
  const std::size_t m = std::size(a), n = std::size(b);
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t up = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[n];
}

// Code points of a UTF-8 string; stray bytes pass through as themselves.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    auto b = static_cast<unsigned char>(s[i]);
    int len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
    bool ok = len > 0 && i + static_cast<std::size_t>(len) <= s.size();
    for (int k = 1; ok && k < len; ++k) ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

// Character-level distance between two texts (UTF-8 code points).
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein_distance(decode_utf8(a), decode_utf8(b));
}

// Lowercased word tokens with ASCII punctuation treated as whitespace.
inline std::vector<std::string> bleu_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || (c < 0x80 && std::ispunct(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Clipped n-gram precisions for n = 1..N combined by geometric mean, times
// the brevity penalty. N is max_n capped at the candidate length, so texts
// shorter than max_n tokens are scored on the orders they have (and a text
// scores 1 against itself). Any zero precision gives 0; no smoothing.
inline double bleu(std::string_view candidate, std::string_view reference, int max_n = 4) {
  if (max_n < 1) max_n = 1;
  const auto cand = bleu_tokens(candidate);
  const auto ref = bleu_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;

  auto ngram_counts = [](const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::vector<std::string>, int> counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i)
      ++counts[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                        toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return counts;
  };

  const int order = static_cast<int>(std::min(cand.size(), static_cast<std::size_t>(max_n)));
  double log_sum = 0.0;
  for (int n = 1; n <= order; ++n) {
    const auto un = static_cast<std::size_t>(n);
    auto c = ngram_counts(cand, un);
    auto r = ngram_counts(ref, un);
    long matched = 0;
    for (const auto& [gram, count] : c) {
      auto it = r.find(gram);
      if (it != r.end()) matched += std::min(count, it->second);
    }
    if (matched == 0) return 0.0;
    const double total = static_cast<double>(cand.size() - un + 1);
    log_sum += std::log(static_cast<double>(matched) / total);
  }
  const double c_len = static_cast<double>(cand.size());
  const double r_len = static_cast<double>(ref.size());
  const double bp = c_len < r_len ? std::exp(1.0 - r_len / c_len) : 1.0;
  return std::clamp(bp * std::exp(log_sum / order), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Corpus reports

struct TextPair {
  std::string label;
  std::string a;
  std::string b;
};

struct MetricRow {
  std::string pair_label;
  std::size_t levenshtein = 0;
  double bleu = 0.0;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  double mean_levenshtein = 0.0;
  double mean_bleu = 0.0;
};

enum class MetricSelection { levenshtein, bleu, both };

// BLEU treats the first text of each pair as the reference.
inline MetricReport corpus_report(std::span<const TextPair> pairs) {
  MetricReport rep;
  for (const auto& p : pairs)
    rep.rows.push_back({p.label, levenshtein(p.a, p.b), bleu(p.b, p.a)});
  if (!rep.rows.empty()) {
    double lev = 0, bl = 0;
    for (const auto& r : rep.rows) {
      lev += static_cast<double>(r.levenshtein);
      bl += r.bleu;
    }
    rep.mean_levenshtein = lev / static_cast<double>(rep.rows.size());
    rep.mean_bleu = bl / static_cast<double>(rep.rows.size());
  }
  return rep;
}

// Aligned plain-text table: label, Lev, BLEU columns, then a Mean row.
inline std::string format_report(const MetricReport& rep, MetricSelection sel = MetricSelection::both) {
  const bool lev = sel != MetricSelection::bleu;
  const bool bl = sel != MetricSelection::levenshtein;
  auto fixed = [](double v, int prec) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
  };
  std::vector<std::vector<std::string>> table;
  table.push_back({""});
  if (lev) table.back().push_back("Lev");
  if (bl) table.back().push_back("BLEU");
  for (const auto& r : rep.rows) {
    table.push_back({r.pair_label});
    if (lev) table.back().push_back(std::to_string(r.levenshtein));
    if (bl) table.back().push_back(fixed(r.bleu, 2));
  }
  table.push_back({"Mean"});
  if (lev) table.back().push_back(fixed(rep.mean_levenshtein, 1));
  if (bl) table.back().push_back(fixed(rep.mean_bleu, 2));

  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  for (const auto& row : table) {
    std::string line = row[0] + std::string(width[0] - row[0].size(), ' ');
    for (std::size_t i = 1; i < row.size(); ++i)
      line += "  " + std::string(width[i] - row[i].size(), ' ') + row[i];
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

inline std::string report_csv(const MetricReport& rep) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream os;
  os << std::setprecision(17);
  os << "pair,levenshtein,bleu\n";
  for (const auto& r : rep.rows) os << quote(r.pair_label) << ',' << r.levenshtein << ',' << r.bleu << '\n';
  os << "mean," << rep.mean_levenshtein << ',' << rep.mean_bleu << '\n';
  return os.str();
}

}  // namespace retell
