#include "recourse/error.hpp"
#include "recourse/rulelang.hpp"

#include <cctype>

namespace recourse {

namespace {

enum class Tok : std::uint8_t {
  ident,     // lowercase identifier
  variable,  // Uppercase or _ identifier
  number,
  quoted,    // 'quoted symbol'
  lparen,
  rparen,
  comma,
  period,
  if_,       // :-
  query,     // ?-
  cmp,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  CmpOp op = CmpOp::eq;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;

    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::variable : Tok::ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::number;
      t.text = lex_number();
      return t;
    }
    if (c == '`') {
      // backquoted numeric literal: `6849.0`
      advance();
      skip_space();
      std::string sign;
      if (pos_ < src_.size() && src_[pos_] == '-') {
        sign = "-";
        advance();
      }
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        throw ParseError(t.line, t.column, "expected number inside backquotes");
      }
      t.kind = Tok::number;
      t.text = sign + lex_number();
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != '`') {
        throw ParseError(t.line, t.column, "unterminated backquoted number");
      }
      advance();
      return t;
    }
    if (c == '\'' || c == '"') {
      char quote = c;
      advance();
      std::string s;
      while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') {
          throw ParseError(t.line, t.column, "unterminated quoted symbol");
        }
        if (src_[pos_] == quote) {
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == quote) {
            s.push_back(quote);
            advance();
            advance();
            continue;
          }
          advance();
          break;
        }
        s.push_back(src_[pos_]);
        advance();
      }
      t.kind = Tok::quoted;
      t.text = s;
      return t;
    }
    switch (c) {
      case '(': advance(); t.kind = Tok::lparen; return t;
      case ')': advance(); t.kind = Tok::rparen; return t;
      case ',': advance(); t.kind = Tok::comma; return t;
      case '.': advance(); t.kind = Tok::period; return t;
      default: break;
    }
    if (match(":-")) { t.kind = Tok::if_; return t; }
    if (match("?-")) { t.kind = Tok::query; return t; }

    // comparison operators, longest match first
    static const std::pair<const char*, CmpOp> ops[] = {
        {"#\\=", CmpOp::ne}, {"#>=", CmpOp::ge}, {"#=<", CmpOp::le}, {"#<=", CmpOp::le},
        {"#=", CmpOp::eq},   {"#<", CmpOp::lt},  {"#>", CmpOp::gt},  {"\\=", CmpOp::ne},
        {"=<", CmpOp::le},   {">=", CmpOp::ge},  {"<=", CmpOp::le},  {"=", CmpOp::eq},
        {"<", CmpOp::lt},    {">", CmpOp::gt},
    };
    for (const auto& [spell, op] : ops) {
      if (match(spell)) {
        t.kind = Tok::cmp;
        t.op = op;
        t.text = spell;
        return t;
      }
    }
    if (c == '-' && pos_ + 1 < src_.size() &&
        (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '`')) {
      advance();
      Token n = next();
      if (n.kind != Tok::number) throw ParseError(t.line, t.column, "expected number after '-'");
      n.text = (n.text.starts_with("-") ? n.text.substr(1) : "-" + n.text);
      n.line = t.line;
      n.column = t.column;
      return n;
    }
    throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool match(std::string_view s) {
    if (src_.substr(pos_, s.size()) != s) return false;
    for (std::size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string lex_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, int scale) : lex_(src), scale_(scale) { shift(); }

  std::vector<Rule> rules() {
    std::vector<Rule> out;
    while (cur_.kind != Tok::end) out.push_back(rule());
    return out;
  }

  std::vector<Literal> query() {
    if (cur_.kind == Tok::query) shift();
    if (cur_.kind == Tok::end) throw ParseError(cur_.line, cur_.column, "empty query");
    anon_ = 0;
    auto body = literals();
    if (cur_.kind == Tok::period) shift();
    if (cur_.kind != Tok::end) fail("expected end of query");
    return body;
  }

 private:
  Rule rule() {
    Rule r;
    r.line = cur_.line;
    anon_ = 0;
    if (cur_.kind == Tok::if_) {
      shift();
      r.head_kind = HeadKind::none;
      r.body = literals();
      expect(Tok::period, "'.'");
      return r;
    }
    if (cur_.kind == Tok::ident && cur_.text == "not") {
      shift();
      r.head_kind = HeadKind::negated;
    }
    if (cur_.kind != Tok::ident) fail("expected rule head");
    r.head = atom();
    if (r.head_kind == HeadKind::atom && r.head.pred == "false" && r.head.args.empty() &&
        cur_.kind == Tok::if_) {
      r.head_kind = HeadKind::none;
      r.head = {};
    }
    if (cur_.kind == Tok::if_) {
      shift();
      r.body = literals();
    }
    expect(Tok::period, "'.'");
    return r;
  }

  std::vector<Literal> literals() {
    std::vector<Literal> out;
    out.push_back(literal());
    while (cur_.kind == Tok::comma) {
      shift();
      out.push_back(literal());
    }
    return out;
  }

  Literal literal() {
    if (cur_.kind == Tok::ident && cur_.text == "not") {
      shift();
      if (cur_.kind == Tok::ident) return Literal::naf(atom());
      fail("expected atom after 'not'");
    }
    if (cur_.kind == Tok::ident) {
      Token first = cur_;
      shift();
      if (cur_.kind == Tok::lparen || cur_.kind != Tok::cmp) {
        return Literal::positive(atom_rest(first));
      }
      Term lhs = Term::symbol(normalize_symbol(first.text));
      return comparison_rest(std::move(lhs));
    }
    Term lhs = term();
    if (cur_.kind != Tok::cmp) fail("expected comparison operator");
    return comparison_rest(std::move(lhs));
  }

  Literal comparison_rest(Term lhs) {
    CmpOp op = cur_.op;
    shift();
    Term rhs = term();
    return Literal::compare(std::move(lhs), op, std::move(rhs));
  }

  Atom atom() {
    Token name = cur_;
    expect(Tok::ident, "predicate name");
    return atom_rest(name);
  }

  Atom atom_rest(const Token& name) {
    Atom a;
    a.pred = name.text;
    if (cur_.kind == Tok::lparen) {
      shift();
      a.args.push_back(term());
      while (cur_.kind == Tok::comma) {
        shift();
        a.args.push_back(term());
      }
      expect(Tok::rparen, "')'");
    }
    return a;
  }

  Term term() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::variable:
        shift();
        if (t.text == "_") return Term::anonymous(anon_++);
        return Term::variable(t.text);
      case Tok::ident:
        shift();
        return Term::symbol(normalize_symbol(t.text));
      case Tok::quoted:
        shift();
        return Term::symbol(normalize_symbol(t.text));
      case Tok::number: {
        shift();
        auto v = parse_scaled(t.text, scale_);
        if (!v) {
          throw ParseError(t.line, t.column,
                           "numeric literal " + t.text + " not representable at scale " +
                               std::to_string(scale_));
        }
        return Term::num(*v);
      }
      default:
        fail("expected term");
    }
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    shift();
  }

  [[noreturn]] void fail(const std::string& msg) {
    std::string near = cur_.kind == Tok::end ? "end of input" : "'" + cur_.text + "'";
    if (cur_.text.empty() && cur_.kind != Tok::end) near = "token";
    throw ParseError(cur_.line, cur_.column, msg + " near " + near);
  }

  void shift() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_;
  int scale_;
  int anon_ = 0;
};

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& options) {
  Parser parser(text, options.scale);
  Program program(parser.rules());
  if (options.check_admissible) check_admissible(program);
  return program;
}

std::vector<Literal> parse_query(std::string_view text, const ParseOptions& options) {
  Parser parser(text, options.scale);
  return parser.query();
}

}  // namespace recourse
