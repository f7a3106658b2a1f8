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

// Paired t-test and one-way ANOVA with p-values from the regularized
// incomplete beta function, plus the ratings CSV reader that feeds them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retell/error.hpp"

namespace retell {

struct StatResult {
  double statistic = 0.0;
  double df1 = 0.0;
  std::optional<double> df2;  // denominator df, ANOVA only
  double p_value = 1.0;
};

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace detail

// I_x(a, b) given both x and y = 1 - x, so callers that know y exactly do not
// lose precision near x = 1.
inline double regularized_incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * detail::beta_continued_fraction(b, a, y) / b;
}

inline double regularized_incomplete_beta(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x, 1.0 - x);
}

// Two-tailed P(|T| >= |t|) for Student's t with df degrees of freedom.
inline double student_t_two_tailed_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2)), 0.0, 1.0);
}

// Upper tail P(F >= f) for the F distribution with (d1, d2) df.
inline double f_upper_tail_p(double f, double d1, double d2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  const double denom = d2 + d1 * f;
  return std::clamp(regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom), 0.0, 1.0);
}

// t over the differences x - y with a sample (n - 1) standard deviation.
// Zero variance: mean 0 reports t = 0, p = 1; otherwise t = +/-inf, p = 0.
inline StatResult paired_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("paired t-test needs equal-length samples");
  if (x.size() < 2) throw std::invalid_argument("paired t-test needs at least two pairs");
  const std::size_t n = x.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);

  StatResult r;
  r.df1 = static_cast<double>(n - 1);
  const bool constant = std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); });
  if (constant || ss == 0.0) {
    if (d.front() == 0.0) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = d.front() > 0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  const double sd = std::sqrt(ss / r.df1);
  r.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p_value = student_t_two_tailed_p(r.statistic, r.df1);
  return r;
}

// F = MS_between / MS_within with df (k - 1, N - k).
inline StatResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw std::invalid_argument("ANOVA needs at least two groups");
  std::size_t total = 0;
  double grand = 0.0;
  std::vector<double> means;
  for (const auto& g : groups) {
    if (g.size() < 2) throw std::invalid_argument("ANOVA needs at least two observations per group");
    double s = 0.0;
    for (double v : g) s += v;
    means.push_back(s / static_cast<double>(g.size()));
    grand += s;
    total += g.size();
  }
  grand /= static_cast<double>(total);
  double ss_between = 0.0, ss_within = 0.0;
  bool within_zero = true;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    ss_between += static_cast<double>(g.size()) * (means[i] - grand) * (means[i] - grand);
    for (double v : g) {
      ss_within += (v - means[i]) * (v - means[i]);
      if (v != g.front()) within_zero = false;
    }
  }
  StatResult r;
  r.df1 = static_cast<double>(groups.size() - 1);
  r.df2 = static_cast<double>(total - groups.size());
  const bool equal_means = std::all_of(means.begin(), means.end(), [&](double m) { return m == means.front(); });
  if (equal_means) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (within_zero || ss_within == 0.0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  r.statistic = (ss_between / r.df1) / (ss_within / *r.df2);
  r.p_value = f_upper_tail_p(r.statistic, r.df1, *r.df2);
  return r;
}

// ---------------------------------------------------------------------------
// Ratings CSV: header story,condition,subject,correctness,preference

struct Rating {
  std::string story;
  std::string condition;
  std::string subject;
  double correctness = 0.0;
  double preference = 0.0;
};

enum class Measure { correctness, preference };

inline double measure_of(const Rating& r, Measure m) {
  return m == Measure::correctness ? r.correctness : r.preference;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no, static_cast<int>(line.size()) + 1);
  out.push_back(std::move(cur));
  return out;
}

inline double parse_number(const std::string& s, int line_no, const char* column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw ParseError(std::string("bad ") + column + " value '" + s + "'", line_no, 1);
  return v;
}

}  // namespace detail

inline std::vector<Rating> parse_ratings_csv(std::string_view text) {
  std::vector<Rating> out;
  int line_no = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cols = detail::split_csv_line(line, line_no);
    if (!header_seen) {
      const std::vector<std::string> expected{"story", "condition", "subject", "correctness", "preference"};
      if (cols != expected)
        throw ParseError("header must be story,condition,subject,correctness,preference", line_no, 1);
      header_seen = true;
      continue;
    }
    if (cols.size() != 5) throw ParseError("expected 5 columns", line_no, 1);
    out.push_back({cols[0], cols[1], cols[2], detail::parse_number(cols[3], line_no, "correctness"),
                   detail::parse_number(cols[4], line_no, "preference")});
  }
  if (!header_seen) throw ParseError("missing header", 1, 1);
  return out;
}

// Conditions in order of first appearance.
inline std::vector<std::string> conditions_of(std::span<const Rating> ratings) {
  std::vector<std::string> out;
  for (const auto& r : ratings)
    if (std::find(out.begin(), out.end(), r.condition) == out.end()) out.push_back(r.condition);
  return out;
}

inline double condition_mean(std::span<const Rating> ratings, std::string_view condition, Measure m) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& r : ratings)
    if (r.condition == condition) {
      s += measure_of(r, m);
      ++n;
    }
  if (n == 0) throw ValidationError("no ratings for condition '" + std::string(condition) + "'");
  return s / static_cast<double>(n);
}

inline std::vector<double> condition_values(std::span<const Rating> ratings, std::string_view condition, Measure m) {
  std::vector<double> out;
  for (const auto& r : ratings)
    if (r.condition == condition) out.push_back(measure_of(r, m));
  return out;
}

// Pairs two conditions by (story, subject). Every key must be rated exactly
// once under each condition.
inline std::pair<std::vector<double>, std::vector<double>> paired_values(std::span<const Rating> ratings,
                                                                         std::string_view a, std::string_view b,
                                                                         Measure m) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, double> va, vb;
  for (const auto& r : ratings) {
    auto* dst = r.condition == a ? &va : r.condition == b ? &vb : nullptr;
    if (!dst) continue;
    if (!dst->emplace(Key{r.story, r.subject}, measure_of(r, m)).second)
      throw ValidationError("duplicate rating for story '" + r.story + "', subject '" + r.subject +
                            "', condition '" + r.condition + "'");
  }
  std::vector<double> xs, ys;
  for (const auto& [key, v] : va) {
    auto it = vb.find(key);
    if (it == vb.end())
      throw ValidationError("story '" + key.first + "', subject '" + key.second + "' has no rating for '" +
                            std::string(b) + "'");
    xs.push_back(v);
    ys.push_back(it->second);
  }
  if (va.size() != vb.size())
    throw ValidationError("conditions '" + std::string(a) + "' and '" + std::string(b) + "' are not fully paired");
  return {xs, ys};
}

// Means table with one column per condition and rows C (correctness) and P
// (preference), two decimals, columns separated by two spaces.
inline std::string format_condition_means(std::span<const Rating> ratings, std::span<const std::string> conditions) {
  std::vector<std::vector<std::string>> table;
  table.push_back({""});
  for (const auto& c : conditions) table.back().push_back(c);
  for (auto [label, m] : {std::pair{"C", Measure::correctness}, std::pair{"P", Measure::preference}}) {
    table.push_back({label});
    for (const auto& c : conditions) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(2) << condition_mean(ratings, c, m);
      table.back().push_back(os.str());
    }
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  for (const auto& row : table) {
    std::string line = row[0] + std::string(width[0] - row[0].size(), ' ');
    for (std::size_t i = 1; i < row.size(); ++i) line += "  " + std::string(width[i] - row[i].size(), ' ') + row[i];
    os << line << '\n';
  }
  return os.str();
}

// "t(3) = 1.0000, p = 0.3910" or "F(2, 3) = 16.0000, p = 0.0251".
inline std::string format_stat_result(const StatResult& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  auto df = [](double v) {
    std::ostringstream d;
    d << v;
    return d.str();
  };
  if (r.df2)
    os << "F(" << df(r.df1) << ", " << df(*r.df2) << ") = " << r.statistic;
  else
    os << "t(" << df(r.df1) << ") = " << r.statistic;
  os << ", p = " << r.p_value;
  return os.str();
}

}  // namespace retell
