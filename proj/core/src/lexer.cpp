#include "lexer.hpp"

#include <cctype>

namespace lola::detail {
namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

// Length of the UTF-8 sequence starting with lead byte `c`.
std::size_t utf8_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xE) return 3;
  if ((c >> 3) == 0x1E) return 4;
  return 1;
}

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", {src_.size(), src_.size()}});
        return out;
      }
      bool after_dot = !out.empty() && out.back().kind == Tok::Dot;
      out.push_back(next(after_dot));
    }
  }

 private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t start, std::string text = {}) {
    return {kind, std::move(text), {start, pos_}};
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  Token next(bool after_dot) {
    std::size_t start = pos_;
    unsigned char c = static_cast<unsigned char>(src_[pos_]);

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return make(Tok::Ident, start, std::string(src_.substr(start, pos_ - start)));
    }
    if (digit(static_cast<char>(c))) return number(start, after_dot);
    if (c == '"') return string(start);

    if (starts_with("∧")) { pos_ += 3; return make(Tok::AndAnd, start); }
    if (starts_with("∨")) { pos_ += 3; return make(Tok::OrOr, start); }

    auto two = [&](char second) {
      return pos_ + 1 < src_.size() && src_[pos_ + 1] == second;
    };
    switch (c) {
      case '(': ++pos_; return make(Tok::LParen, start);
      case ')': ++pos_; return make(Tok::RParen, start);
      case '[': ++pos_; return make(Tok::LBracket, start);
      case ']': ++pos_; return make(Tok::RBracket, start);
      case ',': ++pos_; return make(Tok::Comma, start);
      case '.': ++pos_; return make(Tok::Dot, start);
      case '@': ++pos_; return make(Tok::At, start);
      case '+': ++pos_; return make(Tok::Plus, start);
      case '-': ++pos_; return make(Tok::Minus, start);
      case '*': ++pos_; return make(Tok::Star, start);
      case '/': ++pos_; return make(Tok::Slash, start);
      case '%': ++pos_; return make(Tok::Percent, start);
      case ':':
        if (two('=')) { pos_ += 2; return make(Tok::Assign, start); }
        ++pos_;
        return make(Tok::Colon, start);
      case '=':
        if (two('=')) { pos_ += 2; return make(Tok::EqEq, start); }
        break;
      case '!':
        if (two('=')) { pos_ += 2; return make(Tok::NotEq, start); }
        ++pos_;
        return make(Tok::Bang, start);
      case '<':
        if (two('=')) { pos_ += 2; return make(Tok::Le, start); }
        ++pos_;
        return make(Tok::Lt, start);
      case '>':
        if (two('=')) { pos_ += 2; return make(Tok::Ge, start); }
        ++pos_;
        return make(Tok::Gt, start);
      case '&':
        if (two('&')) { pos_ += 2; return make(Tok::AndAnd, start); }
        break;
      case '|':
        if (two('|')) { pos_ += 2; return make(Tok::OrOr, start); }
        break;
      default:
        break;
    }
    pos_ += utf8_length(c);
    if (pos_ > src_.size()) pos_ = src_.size();
    while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) ++pos_;
    diags_.push_back({codes::kUnexpectedToken, Severity::Error,
                      "unexpected character `" + std::string(src_.substr(start, pos_ - start)) + "`",
                      {start, pos_}, {}});
    return make(Tok::Error, start);
  }

  Token number(std::size_t start, bool after_dot) {
    while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
    bool is_float = false;
    // Directly after `.` only an integer can follow (tuple projection).
    if (!after_dot) {
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' && digit(src_[pos_ + 1])) {
        is_float = true;
        ++pos_;
        while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
        if (p < src_.size() && digit(src_[p])) {
          is_float = true;
          pos_ = p;
          while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
        }
      }
    }
    return make(is_float ? Tok::Float : Tok::Int, start,
                std::string(src_.substr(start, pos_ - start)));
  }

  Token string(std::size_t start) {
    ++pos_;
    std::string text;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        ++pos_;
        return make(Tok::String, start, std::move(text));
      }
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char e = src_[pos_ + 1];
        pos_ += 2;
        switch (e) {
          case 'n': text.push_back('\n'); break;
          case 't': text.push_back('\t'); break;
          default: text.push_back(e); break;
        }
        continue;
      }
      text.push_back(c);
      ++pos_;
    }
    diags_.push_back({codes::kUnterminatedString, Severity::Error,
                      "unterminated string literal", {start, pos_}, {}});
    return make(Tok::Error, start);
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diagnostics) {
  return Lexer(source, diagnostics).run();
}

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Float: return "number";
    case Tok::String: return "string";
    case Tok::LParen: return "`(`";
    case Tok::RParen: return "`)`";
    case Tok::LBracket: return "`[`";
    case Tok::RBracket: return "`]`";
    case Tok::Comma: return "`,`";
    case Tok::Colon: return "`:`";
    case Tok::Assign: return "`:=`";
    case Tok::Dot: return "`.`";
    case Tok::At: return "`@`";
    case Tok::Plus: return "`+`";
    case Tok::Minus: return "`-`";
    case Tok::Star: return "`*`";
    case Tok::Slash: return "`/`";
    case Tok::Percent: return "`%`";
    case Tok::EqEq: return "`==`";
    case Tok::NotEq: return "`!=`";
    case Tok::Lt: return "`<`";
    case Tok::Le: return "`<=`";
    case Tok::Gt: return "`>`";
    case Tok::Ge: return "`>=`";
    case Tok::AndAnd: return "`&&`";
    case Tok::OrOr: return "`||`";
    case Tok::Bang: return "`!`";
    case Tok::Error: return "invalid token";
    case Tok::End: return "end of input";
  }
  return "token";
}

}  // namespace lola::detail
