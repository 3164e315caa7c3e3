#ifndef EPIC_LEXER_HPP
#define EPIC_LEXER_HPP

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "epi_text.hpp"

namespace epic {

struct Token {
  enum class Kind { Ident, Int, Symbol, End };
  Kind kind;
  std::string text;
  long long number = 0;
  int line = 1, col = 1;
};

// Shared lexer for the .epi, .tenv and .wc formats. Identifiers may start
// with '$' (compiler-minted names); '#' is not lexable, which keeps runtime
// fresh names out of every concrete syntax.
class Lexer {
public:
  Lexer(const std::string& text, std::set<std::string> keywords)
      : src_(text), keywords_(std::move(keywords)) {
    tokenize();
  }

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_symbol(const std::string& s) const {
    return peek().kind == Token::Kind::Symbol && peek().text == s;
  }
  bool at_keyword(const std::string& k) const {
    return peek().kind == Token::Kind::Ident && peek().text == k && keywords_.count(k);
  }
  bool at_ident() const {
    return peek().kind == Token::Kind::Ident && !keywords_.count(peek().text);
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool eat_symbol(const std::string& s) {
    if (!at_symbol(s)) return false;
    next();
    return true;
  }
  bool eat_keyword(const std::string& k) {
    if (!at_keyword(k)) return false;
    next();
    return true;
  }
  void expect_symbol(const std::string& s) {
    if (!eat_symbol(s)) fail("expected '" + s + "'");
  }
  void expect_keyword(const std::string& k) {
    if (!eat_keyword(k)) fail("expected '" + k + "'");
  }
  std::string expect_ident(const std::string& what) {
    if (!at_ident()) fail("expected " + what);
    return next().text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw epi::ParseError(msg + ", got " + got, t.line, t.col);
  }

private:
  void tokenize() {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (src_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '/' && i + 1 < src_.size() && src_[i + 1] == '/') {
        while (i < src_.size() && src_[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' ||
                src_[j] == '$'))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = src_.substr(i, j - i);
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Token::Kind::Int;
        t.text = src_.substr(i, j - i);
        t.number = std::stoll(t.text);
        advance(j - i);
      } else {
        static const char* two[] = {":=", "::"};
        std::string sym(1, c);
        for (const char* s : two)
          if (src_.compare(i, 2, s) == 0) sym = s;
        static const std::string singles = "*!?().,:|+[]=<-{};";
        if (sym.size() == 1 && singles.find(c) == std::string::npos)
          throw epi::ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
        t.kind = Token::Kind::Symbol;
        t.text = sym;
        advance(sym.size());
      }
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    tokens_.push_back(end);
  }

  std::string src_;
  std::set<std::string> keywords_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

} // namespace epic

#endif
