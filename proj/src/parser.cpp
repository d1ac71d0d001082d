#include <sstream>

#include "khsat/formula.hpp"

namespace khsat {

namespace {

std::string describe(const std::string& found, const std::vector<std::string>& expected, const std::string& detail) {
  std::ostringstream os;
  if (!detail.empty()) {
    os << detail;
  } else {
    os << "unexpected " << found;
  }
  if (!expected.empty()) {
    os << "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string found, std::vector<std::string> expected,
                       std::string detail)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         describe(found, expected, detail)),
      line_(line),
      column_(column),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Atom, True, False, Not, And, Or, Implies, Iff, Kh, Univ, Exis, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::string quoteTok(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

bool isLower(char c) { return c >= 'a' && c <= 'z'; }
bool isUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool isIdent(char c) { return isLower(c) || isUpper(c) || (c >= '0' && c <= '9') || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view src, ParseOptions opts) : src_(src), opts_(opts) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpace();
      std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      auto single = [&](Tok k) {
        out.push_back({k, std::string(1, ch), l, c});
        advance(1);
      };
      switch (ch) {
        case '~': single(Tok::Not); continue;
        case '&': single(Tok::And); continue;
        case '|': single(Tok::Or); continue;
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case ',': single(Tok::Comma); continue;
        default: break;
      }
      if (src_.substr(pos_, 2) == "->") {
        out.push_back({Tok::Implies, "->", l, c});
        advance(2);
        continue;
      }
      if (src_.substr(pos_, 3) == "<->") {
        out.push_back({Tok::Iff, "<->", l, c});
        advance(3);
        continue;
      }
      if (isLower(ch) || isUpper(ch) || ch == '_') {
        std::size_t end = pos_;
        while (end < src_.size() && isIdent(src_[end])) ++end;
        std::string word(src_.substr(pos_, end - pos_));
        advance(end - pos_);
        if (word == "true") {
          out.push_back({Tok::True, word, l, c});
        } else if (word == "false") {
          out.push_back({Tok::False, word, l, c});
        } else if (word == "Kh") {
          out.push_back({Tok::Kh, word, l, c});
        } else if (word == "A") {
          out.push_back({Tok::Univ, word, l, c});
        } else if (word == "E") {
          out.push_back({Tok::Exis, word, l, c});
        } else if (isLower(word[0])) {
          out.push_back({Tok::Atom, word, l, c});
        } else if (word.starts_with(kReservedPrefix)) {
          if (!opts_.allowReserved)
            throw ParseError(l, c, "'" + word + "'", {"atom"},
                             "atom '" + word + "' uses the reserved prefix '" + std::string(kReservedPrefix) + "'");
          out.push_back({Tok::Atom, word, l, c});
        } else {
          throw ParseError(l, c, "'" + word + "'", {"atom", "'Kh'", "'A'", "'E'"});
        }
        continue;
      }
      std::size_t len = 1;
      auto u = static_cast<unsigned char>(ch);
      if (u >= 0xF0) len = 4;
      else if (u >= 0xE0) len = 3;
      else if (u >= 0xC0) len = 2;
      throw ParseError(l, c, "character '" + std::string(src_.substr(pos_, len)) + "'", {});
    }
  }

 private:
  void skipSpace() {
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        advance(1);
      } else {
        break;
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      char ch = src_[pos_++];
      if (ch == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  std::string_view src_;
  ParseOptions opts_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

const std::vector<std::string> kOperandStart = {"atom", "'true'", "'false'", "'~'", "'A'", "'E'", "'Kh'", "'('"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = parseIff();
    if (peek().kind != Tok::End) fail({"'&'", "'|'", "'->'", "'<->'", "end of input"});
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, quoteTok(t), std::move(expected));
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail({what});
    ++pos_;
  }

  Formula parseIff() {
    Formula f = parseImplies();
    while (peek().kind == Tok::Iff) {
      ++pos_;
      f = Formula::biconditional(f, parseImplies());
    }
    return f;
  }

  Formula parseImplies() {
    Formula f = parseOr();
    if (peek().kind == Tok::Implies) {
      ++pos_;
      return Formula::implication(f, parseImplies());
    }
    return f;
  }

  Formula parseOr() {
    Formula f = parseAnd();
    while (peek().kind == Tok::Or) {
      ++pos_;
      f = Formula::disjunction(f, parseAnd());
    }
    return f;
  }

  Formula parseAnd() {
    Formula f = parseUnary();
    while (peek().kind == Tok::And) {
      ++pos_;
      f = Formula::conjunction(f, parseUnary());
    }
    return f;
  }

  Formula parseUnary() {
    switch (peek().kind) {
      case Tok::Not: ++pos_; return Formula::negation(parseUnary());
      case Tok::Univ: ++pos_; return Formula::universal(parseUnary());
      case Tok::Exis: ++pos_; return Formula::existential(parseUnary());
      default: return parsePrimary();
    }
  }

  Formula parsePrimary() {
    switch (peek().kind) {
      case Tok::Atom: return Formula::atom(take().text);
      case Tok::True: ++pos_; return Formula::top();
      case Tok::False: ++pos_; return Formula::bottom();
      case Tok::LParen: {
        ++pos_;
        Formula f = parseIff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Kh: {
        ++pos_;
        expect(Tok::LParen, "'('");
        Formula a = parseIff();
        expect(Tok::Comma, "','");
        Formula b = parseIff();
        expect(Tok::RParen, "')'");
        return Formula::kh(a, b);
      }
      default: fail(kOperandStart);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(const Formula& f) {
  switch (f.op()) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not:
    case Op::Univ:
    case Op::Exis: return 5;
    default: return 6;
  }
}

void renderInto(const Formula& f, std::string& out);

void renderChild(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  renderInto(f, out);
  if (parens) out += ')';
}

void renderInto(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Not:
      out += '~';
      renderChild(f.operand(), precedence(f.operand()) < 5, out);
      return;
    case Op::Univ:
    case Op::Exis:
      out += f.op() == Op::Univ ? "A " : "E ";
      renderChild(f.operand(), precedence(f.operand()) < 5, out);
      return;
    case Op::Kh:
      out += "Kh(";
      renderInto(f.pre(), out);
      out += ", ";
      renderInto(f.post(), out);
      out += ')';
      return;
    default: break;
  }
  int p = precedence(f);
  bool rightAssoc = f.op() == Op::Implies;
  int lp = precedence(f.operand(0)), rp = precedence(f.operand(1));
  renderChild(f.operand(0), rightAssoc ? lp <= p : lp < p, out);
  switch (f.op()) {
    case Op::Iff: out += " <-> "; break;
    case Op::Implies: out += " -> "; break;
    case Op::Or: out += " | "; break;
    default: out += " & "; break;
  }
  renderChild(f.operand(1), rightAssoc ? rp < p : rp <= p, out);
}

}  // namespace

Formula parse(std::string_view text, ParseOptions options) {
  return Parser(Lexer(text, options).run()).run();
}

std::string render(const Formula& f) {
  std::string out;
  renderInto(f, out);
  return out;
}

}  // namespace khsat
