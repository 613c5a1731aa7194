#pragma once

#include <string>
#include <string_view>

#include "stridesea/error.hpp"
#include "stridesea/format.hpp"

namespace stridesea::textio {

enum class TokenKind { kEnd, kString, kNumber, kWord, kLBrace, kRBrace };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // unescaped for strings, lexeme otherwise
  double number = 0.0;
  SourceSpan span;

  std::string describe() const {
    switch (kind) {
      case TokenKind::kEnd: return "end of input";
      case TokenKind::kString: return "\"" + text + "\"";
      case TokenKind::kNumber: return text;
      case TokenKind::kWord: return "word " + text;
      case TokenKind::kLBrace: return "\"{\"";
      case TokenKind::kRBrace: return "\"}\"";
    }
    return text;
  }
  bool is_word(std::string_view w) const { return kind == TokenKind::kWord && text == w; }
};

// Shared tokenizer for the model and attack-tree languages. '#' starts a
// comment running to end of line. Columns count UTF-8 code points.
class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  Token next() {
    skip_trivia();
    Token tok;
    tok.span = here();
    if (pos_ >= text_.size()) {
      tok.kind = TokenKind::kEnd;
      tok.span = end_span();
      return tok;
    }
    char c = text_[pos_];
    if (c == '{' || c == '}') {
      tok.kind = c == '{' ? TokenKind::kLBrace : TokenKind::kRBrace;
      tok.text = std::string(1, c);
      advance();
      return tok;
    }
    if (c == '"') return lex_string(tok);
    if (c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9')) return lex_number(tok);
    if (is_word_char(c)) {
      tok.kind = TokenKind::kWord;
      while (pos_ < text_.size() && is_word_char(text_[pos_])) {
        tok.text += text_[pos_];
        advance();
      }
      return tok;
    }
    throw ParseError(tok.span, "token", quote_char());
  }

  // Span of the last code point in the input, or 1:1 for empty input.
  SourceSpan end_span() const {
    if (text_.empty()) return {file_, 1, 1};
    return last_span_;
  }

 private:
  static bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '-' ||
           (c >= '0' && c <= '9');
  }

  SourceSpan here() const { return {file_, line_, column_}; }

  std::string quote_char() const {
    std::size_t n = 1;
    while (pos_ + n < text_.size() && (static_cast<unsigned char>(text_[pos_ + n]) & 0xC0) == 0x80)
      ++n;
    return "'" + std::string(text_.substr(pos_, n)) + "'";
  }

  void advance() {
    last_span_ = here();
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
      return;
    }
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) ++pos_;
    ++column_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_string(Token& tok) {
    tok.kind = TokenKind::kString;
    advance();  // opening quote
    while (true) {
      if (pos_ >= text_.size()) throw ParseError(end_span(), "closing '\"'", "end of input");
      char c = text_[pos_];
      if (c == '\n') throw ParseError(here(), "closing '\"'", "end of line");
      if (c == '"') {
        advance();
        return tok;
      }
      if (c == '\\') {
        SourceSpan esc = here();
        advance();
        if (pos_ >= text_.size()) throw ParseError(end_span(), "escape sequence", "end of input");
        char e = text_[pos_];
        if (e != '"' && e != '\\') throw ParseError(esc, "\\\" or \\\\", quote_char());
        tok.text += e;
        advance();
        continue;
      }
      std::size_t start = pos_;
      advance();
      tok.text.append(text_.substr(start, pos_ - start));
    }
  }

  Token lex_number(Token& tok) {
    tok.kind = TokenKind::kNumber;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (!((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+')) break;
      tok.text += c;
      advance();
    }
    auto v = parse_decimal(tok.text);
    if (!v) throw ParseError(tok.span, "number", tok.text);
    tok.number = *v;
    return tok;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  SourceSpan last_span_;
};

// One-token lookahead wrapper with the expectation helpers both grammars use.
class TokenStream {
 public:
  TokenStream(std::string_view text, std::string file) : lexer_(text, std::move(file)) {
    current_ = lexer_.next();
  }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = std::move(current_);
    current_ = lexer_.next();
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(current_.span, expected, current_.describe());
  }

  Token expect(TokenKind kind, const std::string& expected) {
    if (current_.kind != kind) fail(expected);
    return take();
  }

  Token expect_word(std::string_view word) {
    if (!current_.is_word(word)) fail("\"" + std::string(word) + "\"");
    return take();
  }

  bool accept_word(std::string_view word) {
    if (!current_.is_word(word)) return false;
    take();
    return true;
  }

  std::string expect_string(const std::string& what) {
    return expect(TokenKind::kString, what).text;
  }

 private:
  Lexer lexer_;
  Token current_;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace stridesea::textio
