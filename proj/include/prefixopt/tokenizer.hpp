#pragma once

#include <cctype>
#include <cstddef>
#include <string_view>
#include <vector>

#include "prefixopt/errors.hpp"

namespace prefixopt {

// Pluggable text -> token mapping. The objective only needs token counts;
// the cache simulator also needs the token pieces themselves so it can match
// prefixes. Both views must agree: count(s) == tokens(s).size().
//
// Implementations must be deterministic and stateless; instances are shared
// across threads.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual std::string_view name() const = 0;

  // Token pieces as views into `text` (valid while `text` is alive).
  virtual std::vector<std::string_view> tokens(std::string_view text) const = 0;

  virtual std::size_t count(std::string_view text) const {
    return tokens(text).size();
  }
};

// One token per byte.
class CharTokenizer final : public Tokenizer {
 public:
  std::string_view name() const override { return "char"; }

  std::vector<std::string_view> tokens(std::string_view text) const override {
    std::vector<std::string_view> out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) out.push_back(text.substr(i, 1));
    return out;
  }

  std::size_t count(std::string_view text) const override { return text.size(); }
};

// One token per maximal run of non-whitespace bytes.
class WordTokenizer final : public Tokenizer {
 public:
  std::string_view name() const override { return "word"; }

  std::vector<std::string_view> tokens(std::string_view text) const override {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && is_space(text[i])) ++i;
      std::size_t start = i;
      while (i < text.size() && !is_space(text[i])) ++i;
      if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
  }

  std::size_t count(std::string_view text) const override {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : text) {
      bool sp = is_space(c);
      if (!sp && !in_word) ++n;
      in_word = !sp;
    }
    return n;
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }
};

inline const Tokenizer& char_tokenizer() {
  static const CharTokenizer t;
  return t;
}

inline const Tokenizer& word_tokenizer() {
  static const WordTokenizer t;
  return t;
}

inline const Tokenizer& tokenizer_by_name(std::string_view name) {
  if (name == "char") return char_tokenizer();
  if (name == "word") return word_tokenizer();
  throw schema_error("unknown tokenizer: " + std::string(name) +
                     " (expected 'char' or 'word')");
}

}  // namespace prefixopt
