#pragma once

// Scenario files (.ck).
//
//   scenario "intro" {
//     agents alice bob carol
//     values colors {red blue}
//     announce atleast red 1
//     sight full
//     actual [red blue blue]
//     protocol simultaneous rounds 5
//   }
//
// Statements may appear in any order; each kind at most once. `agents N`
// names the players p1..pN. `sweep` replaces `actual` for families.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ck/scenario.hpp"

namespace ck {

struct SourceSpan {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourceSpan span, std::vector<std::string> expected, std::string found);
  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
  std::string found_;
};

class SemanticError : public std::runtime_error {
 public:
  SemanticError(SourceSpan span, std::string rule);
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

// "file:line:col: error: message"
std::string format_diagnostic(std::string_view file, const SourceSpan& span, std::string_view message);

// Lexical layer shared with the expectation parser.
struct Token {
  enum class Kind : std::uint8_t { Ident, Int, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

std::vector<Token> tokenize(std::string_view text);
std::string describe(const Token& t);
bool is_keyword(std::string_view word);

Scenario parse_scenario(std::string_view text);
std::string print_scenario(const Scenario& s);

// Parses a value written in the scenario's alphabet (colour name or integer).
std::optional<Value> parse_value(const ValueAlphabet& alphabet, const std::string& token);

}  // namespace ck
