#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "rt/dsl.hpp"

namespace rt::dsl {

SyntaxError::SyntaxError(Location at, const std::string& what)
    : Error(std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + what), at_(at) {}

namespace {

enum class Tok { number, ident, op, lparen, rparen, lbrack, rbrack, comma, semi, newline, assign, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double value = 0;
  bool imaginary = false;
  Location at;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::vector<char> nest;  // '(' or '['
    while (true) {
      const bool spaced = skip_blanks();
      if (pos_ >= src_.size()) {
        out.push_back(make(Tok::end, ""));
        break;
      }
      const bool in_brackets = !nest.empty() && nest.back() == '[';
      Token t = next();
      if (in_brackets && t.kind == Tok::newline) {
        if (!out.empty() && out.back().kind != Tok::semi && out.back().kind != Tok::lbrack)
          out.push_back(Token{Tok::semi, ";", 0, false, t.at});
        continue;
      }
      if (in_brackets && spaced && !out.empty() && ends_value(out.back()) && starts_value(t))
        out.push_back(Token{Tok::comma, ",", 0, false, t.at});
      if (t.kind == Tok::lparen) nest.push_back('(');
      if (t.kind == Tok::lbrack) nest.push_back('[');
      if ((t.kind == Tok::rparen || t.kind == Tok::rbrack) && !nest.empty()) nest.pop_back();
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  Token make(Tok k, std::string text) const { return Token{k, std::move(text), 0, false, here()}; }
  Location here() const { return Location{line_, static_cast<int>(pos_ - line_start_) + 1}; }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  // Skips spaces, tabs and comments; returns whether anything was skipped.
  bool skip_blanks() {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '#' || c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    return pos_ != start;
  }

  static bool ends_value(const Token& t) {
    return t.kind == Tok::number || t.kind == Tok::ident || t.kind == Tok::rparen ||
           t.kind == Tok::rbrack || (t.kind == Tok::op && (t.text == "'" || t.text == ".'"));
  }

  bool starts_value(const Token& t) const {
    if (t.kind == Tok::number || t.kind == Tok::ident || t.kind == Tok::lparen ||
        t.kind == Tok::lbrack)
      return true;
    // "[a -b]" has two elements, "[a - b]" one.
    if (t.kind == Tok::op && (t.text == "-" || t.text == "+" || t.text == "~")) {
      const char c = peek();
      return c != ' ' && c != '\t' && c != '\0';
    }
    return false;
  }

  Token next() {
    const Location at = here();
    const char c = peek();
    if (c == '\n') {
      ++pos_;
      ++line_;
      line_start_ = pos_;
      return Token{Tok::newline, "\n", 0, false, at};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return number(at);
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (ident_char(peek())) ++pos_;
      return Token{Tok::ident, std::string(src_.substr(start, pos_ - start)), 0, false, at};
    }
    static const char* const two[] = {"==", "~=", "<=", ">=", ".*", "./", ".\\", ".^", ".'"};
    for (const char* op : two) {
      if (peek() == op[0] && peek(1) == op[1]) {
        pos_ += 2;
        return Token{Tok::op, op, 0, false, at};
      }
    }
    ++pos_;
    switch (c) {
      case '(': return Token{Tok::lparen, "(", 0, false, at};
      case ')': return Token{Tok::rparen, ")", 0, false, at};
      case '[': return Token{Tok::lbrack, "[", 0, false, at};
      case ']': return Token{Tok::rbrack, "]", 0, false, at};
      case ',': return Token{Tok::comma, ",", 0, false, at};
      case ';': return Token{Tok::semi, ";", 0, false, at};
      case '=': return Token{Tok::assign, "=", 0, false, at};
      case '+': case '-': case '*': case '/': case '\\': case '<': case '>':
      case '&': case '|': case '~': case '\'': case ':': case '^':
        return Token{Tok::op, std::string(1, c), 0, false, at};
      default: break;
    }
    throw SyntaxError(at, std::string("unexpected character '") + c + "'");
  }

  Token number(Location at) {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      const char n = peek(1);
      // "1.*x" is 1 .* x
      if (n != '*' && n != '/' && n != '\\' && n != '^' && n != '\'') {
        ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(k) == '+' || peek(k) == '-') ++k;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        pos_ += k;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    Token t{Tok::number, std::string(src_.substr(start, pos_ - start)), 0, false, at};
    t.value = std::strtod(t.text.c_str(), nullptr);
    if ((peek() == 'i' || peek() == 'j') && !ident_char(peek(1))) {
      ++pos_;
      t.imaginary = true;
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
};

NodePtr make_node(NodeKind kind, Location at, std::string text = {},
                  std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->at = at;
  n->text = std::move(text);
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr expression_only() {
    skip_newlines();
    NodePtr e = expr();
    skip_newlines();
    if (cur().kind != Tok::end) fail("unexpected '" + cur().text + "'");
    return e;
  }

  Program program() {
    Program out;
    while (true) {
      while (cur().kind == Tok::newline || cur().kind == Tok::semi || cur().kind == Tok::comma)
        ++pos_;
      if (cur().kind == Tok::end) break;
      out.push_back(statement());
    }
    return out;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool is_op(const char* s) const { return cur().kind == Tok::op && cur().text == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(cur().at, msg); }
  void skip_newlines() {
    while (cur().kind == Tok::newline) ++pos_;
  }
  void expect(Tok k, const char* what) {
    if (cur().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  Statement statement() {
    Statement s;
    s.at = cur().at;
    if (cur().kind == Tok::ident && cur().text == "assert" && toks_[pos_ + 1].kind != Tok::assign) {
      ++pos_;
      s.kind = StatementKind::assert_true;
      s.expr = expr();
    } else {
      NodePtr e = expr();
      if (cur().kind == Tok::assign) {
        if (e->kind != NodeKind::name && e->kind != NodeKind::apply)
          throw SyntaxError(e->at, "left side of '=' must be a name or subscripted name");
        ++pos_;
        s.kind = StatementKind::assign;
        s.target = e;
        s.expr = expr();
      } else {
        s.expr = e;
      }
    }
    if (cur().kind == Tok::semi) {
      s.quiet = true;
      ++pos_;
    } else if (cur().kind == Tok::comma) {
      ++pos_;
    } else if (cur().kind != Tok::newline && cur().kind != Tok::end) {
      fail("unexpected '" + cur().text + "'");
    }
    return s;
  }

  NodePtr expr() { return logical_or(); }

  template <class Next>
  NodePtr left_assoc(std::initializer_list<const char*> ops, Next next) {
    NodePtr lhs = (this->*next)();
    while (true) {
      const char* hit = nullptr;
      for (const char* op : ops)
        if (is_op(op)) hit = op;
      if (!hit) return lhs;
      const Location at = cur().at;
      ++pos_;
      NodePtr rhs = (this->*next)();
      lhs = make_node(NodeKind::binary, at, hit, {lhs, rhs});
    }
  }

  NodePtr logical_or() { return left_assoc({"|"}, &Parser::logical_and); }
  NodePtr logical_and() { return left_assoc({"&"}, &Parser::relation); }
  NodePtr relation() {
    return left_assoc({"==", "~=", "<", ">", "<=", ">="}, &Parser::additive);
  }
  NodePtr additive() { return left_assoc({"+", "-"}, &Parser::multiplicative); }
  NodePtr multiplicative() {
    return left_assoc({"*", "\\", "/", ".*", "./", ".\\"}, &Parser::prefix);
  }

  NodePtr prefix() {
    if (is_op("-") || is_op("+") || is_op("~")) {
      const Location at = cur().at;
      std::string op = cur().text;
      ++pos_;
      return make_node(NodeKind::unary, at, op, {prefix()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = postfix();
    while (is_op(".^")) {
      const Location at = cur().at;
      ++pos_;
      base = make_node(NodeKind::binary, at, ".^", {base, power_operand()});
    }
    return base;
  }

  NodePtr power_operand() {
    if (is_op("-") || is_op("+") || is_op("~")) {
      const Location at = cur().at;
      std::string op = cur().text;
      ++pos_;
      return make_node(NodeKind::unary, at, op, {power_operand()});
    }
    return postfix();
  }

  NodePtr postfix() {
    NodePtr e = primary();
    while (is_op("'") || is_op(".'")) {
      e = make_node(NodeKind::postfix, cur().at, cur().text, {e});
      ++pos_;
    }
    return e;
  }

  NodePtr primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::number: {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::number;
        n->at = t.at;
        n->value = t.value;
        n->imaginary = t.imaginary;
        ++pos_;
        return n;
      }
      case Tok::ident: {
        const Location at = t.at;
        std::string name = t.text;
        ++pos_;
        if (cur().kind != Tok::lparen) return make_node(NodeKind::name, at, name);
        ++pos_;
        std::vector<NodePtr> args;
        if (cur().kind != Tok::rparen) {
          args.push_back(argument());
          while (cur().kind == Tok::comma) {
            ++pos_;
            args.push_back(argument());
          }
        }
        expect(Tok::rparen, "')'");
        return make_node(NodeKind::apply, at, name, std::move(args));
      }
      case Tok::lparen: {
        ++pos_;
        NodePtr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::lbrack: return matrix();
      case Tok::end: fail("unexpected end of input");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  NodePtr argument() {
    if (is_op(":")) {
      const Token& after = toks_[pos_ + 1];
      if (after.kind == Tok::comma || after.kind == Tok::rparen) {
        auto n = make_node(NodeKind::colon, cur().at);
        ++pos_;
        return n;
      }
    }
    NodePtr lo = expr();
    if (!is_op(":")) return lo;
    const Location at = cur().at;
    ++pos_;
    return make_node(NodeKind::range, at, ":", {lo, expr()});
  }

  NodePtr matrix() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::matrix;
    n->at = cur().at;
    ++pos_;
    std::vector<NodePtr> row;
    while (true) {
      if (cur().kind == Tok::rbrack) {
        ++pos_;
        break;
      }
      if (cur().kind == Tok::semi) {
        ++pos_;
        if (!row.empty()) n->rows.push_back(std::move(row));
        row.clear();
        continue;
      }
      if (cur().kind == Tok::comma) {
        if (row.empty()) fail("empty matrix element");
        ++pos_;
        continue;
      }
      if (cur().kind == Tok::end) fail("unterminated '['");
      if (!row.empty() && toks_[pos_ - 1].kind != Tok::comma) fail("expected ',' or ';'");
      row.push_back(expr());
    }
    if (!row.empty()) n->rows.push_back(std::move(row));
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NodePtr parse_expression(std::string_view text) { return Parser(Lexer(text).run()).expression_only(); }

Program parse_program(std::string_view text) { return Parser(Lexer(text).run()).program(); }

bool same_ast(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.text != b.text || a.args.size() != b.args.size() ||
      a.rows.size() != b.rows.size())
    return false;
  if (a.kind == NodeKind::number && (a.value != b.value || a.imaginary != b.imaginary))
    return false;
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!same_ast(*a.args[k], *b.args[k])) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].size() != b.rows[r].size()) return false;
    for (std::size_t k = 0; k < a.rows[r].size(); ++k)
      if (!same_ast(*a.rows[r][k], *b.rows[r][k])) return false;
  }
  return true;
}

std::string to_string(const Node& n) {
  switch (n.kind) {
    case NodeKind::number: return number_text(n.value) + (n.imaginary ? "i" : "");
    case NodeKind::name: return n.text;
    case NodeKind::colon: return ":";
    case NodeKind::range: return to_string(*n.args[0]) + ":" + to_string(*n.args[1]);
    case NodeKind::apply: {
      std::string s = n.text + "(";
      for (std::size_t k = 0; k < n.args.size(); ++k) s += (k ? ", " : "") + to_string(*n.args[k]);
      return s + ")";
    }
    case NodeKind::unary: return "(" + n.text + to_string(*n.args[0]) + ")";
    case NodeKind::postfix: return "(" + to_string(*n.args[0]) + n.text + ")";
    case NodeKind::binary:
      return "(" + to_string(*n.args[0]) + " " + n.text + " " + to_string(*n.args[1]) + ")";
    case NodeKind::matrix: {
      std::string s = "[";
      for (std::size_t r = 0; r < n.rows.size(); ++r) {
        if (r) s += "; ";
        for (std::size_t k = 0; k < n.rows[r].size(); ++k)
          s += (k ? ", " : "") + to_string(*n.rows[r][k]);
      }
      return s + "]";
    }
  }
  return {};
}

std::string to_string(const Statement& s) {
  std::string body;
  switch (s.kind) {
    case StatementKind::expression: body = to_string(*s.expr); break;
    case StatementKind::assign: body = to_string(*s.target) + " = " + to_string(*s.expr); break;
    case StatementKind::assert_true: body = "assert " + to_string(*s.expr); break;
  }
  return s.quiet ? body + ";" : body;
}

}  // namespace rt::dsl
