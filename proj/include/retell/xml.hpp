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

// A small non-validating XML reader and the escaping helpers used by the
// writers. Covers what the DSyntS, story and text plan files need: elements,
// attributes, character data, CDATA, comments, processing instructions and a
// skipped DOCTYPE. Namespaces and external entities are not interpreted.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retell/error.hpp"

namespace retell::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<Element> children;
  std::string text;  // all character data directly inside, CDATA included
  int line = 0;
  int column = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }

  std::vector<const Element*> children_named(std::string_view tag) const {
    std::vector<const Element*> out;
    for (const auto& c : children)
      if (c.name == tag) out.push_back(&c);
    return out;
  }
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  Element document() {
    skip_misc();
    if (eof() || peek() != '<') fail("expected root element");
    Element root = element(0);
    skip_misc();
    if (!eof()) fail("unexpected content after root element");
    return root;
  }

 private:
  static constexpr int kMaxDepth = 256;

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  bool at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (; n > 0 && pos_ < src_.size(); --n, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  [[noreturn]] void fail_at(const std::string& msg, int line, int col) const {
    throw ParseError(msg, line, col);
  }

  void expect(char c) {
    if (peek() != c || eof()) fail(std::string("expected '") + c + "'");
    advance();
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  static bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == ':' || c == '.' || u >= 0x80;
  }

  void skip_ws() {
    while (!eof() && is_space(peek())) advance();
  }

  void skip_past(std::string_view terminator, const char* what) {
    const int line = line_, col = col_;
    auto found = src_.find(terminator, pos_);
    if (found == std::string_view::npos) fail_at(std::string("unterminated ") + what, line, col);
    advance(found + terminator.size() - pos_);
  }

  void skip_doctype() {
    const int line = line_, col = col_;
    int bracket = 0;
    while (!eof()) {
      char c = peek();
      advance();
      if (c == '[') ++bracket;
      else if (c == ']') --bracket;
      else if (c == '>' && bracket <= 0) return;
    }
    fail_at("unterminated DOCTYPE", line, col);
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (at("<?")) skip_past("?>", "processing instruction");
      else if (at("<!--")) skip_past("-->", "comment");
      else if (at("<!DOCTYPE")) skip_doctype();
      else return;
    }
  }

  std::string name() {
    std::size_t start = pos_;
    if (eof() || !is_name_char(peek()) || peek() == '-' || peek() == '.') fail("expected a name");
    while (!eof() && is_name_char(peek())) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  // Called with the cursor on '&'.
  void entity(std::string& out) {
    const int line = line_, col = col_;
    auto semi = src_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12)
      fail_at("unterminated entity reference", line, col);
    std::string_view ref = src_.substr(pos_ + 1, semi - pos_ - 1);
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref[1] == 'x' || ref[1] == 'X';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) fail_at("bad character reference", line, col);
      for (char d : digits) {
        int v;
        if (d >= '0' && d <= '9') v = d - '0';
        else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
        else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
        else fail_at("bad character reference", line, col);
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail_at("character reference out of range", line, col);
      }
      append_utf8(out, cp);
    } else {
      fail_at("unknown entity '&" + std::string(ref) + ";'", line, col);
    }
    advance(semi + 1 - pos_);
  }

  std::string attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    advance();
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      char c = peek();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        entity(out);
      } else {
        out += c;
        advance();
      }
    }
    advance();
    return out;
  }

  Element element(int depth) {
    if (depth > kMaxDepth) fail("element nesting too deep");
    Element e;
    e.line = line_;
    e.column = col_;
    expect('<');
    e.name = name();
    for (;;) {
      bool had_space = !eof() && is_space(peek());
      skip_ws();
      if (at("/>")) {
        advance(2);
        return e;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (eof()) fail("unterminated start tag <" + e.name + ">");
      if (!had_space) fail("expected whitespace before attribute");
      const int line = line_, col = col_;
      std::string key = name();
      skip_ws();
      expect('=');
      skip_ws();
      std::string value = attribute_value();
      if (e.attribute(key)) fail_at("duplicate attribute '" + key + "'", line, col);
      e.attributes.emplace_back(std::move(key), std::move(value));
    }
    for (;;) {
      if (eof()) fail_at("unterminated element <" + e.name + ">", e.line, e.column);
      if (at("</")) {
        const int line = line_, col = col_;
        advance(2);
        std::string closing = name();
        if (closing != e.name)
          fail_at("mismatched closing tag </" + closing + "> for <" + e.name + ">", line, col);
        skip_ws();
        expect('>');
        return e;
      }
      if (at("<!--")) {
        skip_past("-->", "comment");
      } else if (at("<![CDATA[")) {
        const int line = line_, col = col_;
        auto end = src_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) fail_at("unterminated CDATA section", line, col);
        e.text.append(src_.substr(pos_ + 9, end - pos_ - 9));
        advance(end + 3 - pos_);
      } else if (at("<?")) {
        skip_past("?>", "processing instruction");
      } else if (peek() == '<') {
        e.children.push_back(element(depth + 1));
      } else if (peek() == '&') {
        entity(e.text);
      } else {
        e.text += peek();
        advance();
      }
    }
  }
};

}  // namespace detail

// Parses a complete document and returns its root element.
inline Element parse(std::string_view text) { return detail::Reader(text).document(); }

inline std::string escape(std::string_view s, bool in_attribute = true) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (in_attribute) out += "&quot;";
        else out += c;
        break;
      default: out += c;
    }
  }
  return out;
}

// Wraps text in CDATA, splitting any embedded terminator.
inline std::string cdata(std::string_view s) {
  std::string out = "<![CDATA[";
  std::size_t start = 0;
  for (auto pos = s.find("]]>"); pos != std::string_view::npos; pos = s.find("]]>", start)) {
    out.append(s.substr(start, pos + 2 - start));
    out += "]]><![CDATA[";
    start = pos + 2;
  }
  out.append(s.substr(start));
  out += "]]>";
  return out;
}

}  // namespace retell::xml
