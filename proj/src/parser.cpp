#include "turaco/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "turaco/error.hpp"

namespace turaco {
namespace {

enum class Tok {
  Fun, Skip, Return, If, Else, Sin, Cos, Exp, Log,
  Ident, Number,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Plus, Minus, Star, Slash,
  PlusEq, MinusEq, StarEq, SlashEq, Assign,
  Lt, Gt, Semi, Comma, End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Fun: return "'fun'";
    case Tok::Skip: return "'skip'";
    case Tok::Return: return "'return'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::Sin: return "'sin'";
    case Tok::Cos: return "'cos'";
    case Tok::Exp: return "'exp'";
    case Tok::Log: return "'log'";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::PlusEq: return "'+='";
    case Tok::MinusEq: return "'-='";
    case Tok::StarEq: return "'*='";
    case Tok::SlashEq: return "'/='";
    case Tok::Assign: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  Real num = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto push = [&](Tok t, std::size_t len) {
    out.push_back({t, src.substr(i, len), 0, line, col});
    advance(len);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          ++k;
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      std::string text = src.substr(i, j - i);
      Real v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size())
        throw ParseError(line, col, "malformed number '" + text + "'");
      out.push_back({Tok::Number, text, v, line, col});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string text = src.substr(i, j - i);
      Tok t = Tok::Ident;
      if (text == "fun") t = Tok::Fun;
      else if (text == "skip") t = Tok::Skip;
      else if (text == "return") t = Tok::Return;
      else if (text == "if") t = Tok::If;
      else if (text == "else") t = Tok::Else;
      else if (text == "sin") t = Tok::Sin;
      else if (text == "cos") t = Tok::Cos;
      else if (text == "exp") t = Tok::Exp;
      else if (text == "log") t = Tok::Log;
      out.push_back({t, text, 0, line, col});
      advance(j - i);
      continue;
    }
    auto two = [&](char second) { return i + 1 < src.size() && src[i + 1] == second; };
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '[': push(Tok::LBracket, 1); continue;
      case ']': push(Tok::RBracket, 1); continue;
      case '+': push(two('=') ? Tok::PlusEq : Tok::Plus, two('=') ? 2 : 1); continue;
      case '-': push(two('=') ? Tok::MinusEq : Tok::Minus, two('=') ? 2 : 1); continue;
      case '*': push(two('=') ? Tok::StarEq : Tok::Star, two('=') ? 2 : 1); continue;
      case '/': push(two('=') ? Tok::SlashEq : Tok::Slash, two('=') ? 2 : 1); continue;
      case '=': push(Tok::Assign, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", 0, line, col});
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    expect(Tok::Fun);
    expect(Tok::LParen);
    std::unordered_set<std::string> seen;
    if (peek().kind != Tok::RParen) {
      for (;;) {
        Token name = expect(Tok::Ident);
        int dim = 0;
        if (peek().kind == Tok::LBracket) {
          next();
          dim = int_literal(1, "vector input length");
          expect(Tok::RBracket);
        }
        if (!seen.insert(name.text).second)
          throw ParseError(name.line, name.col, "duplicate input '" + name.text + "'");
        p.inputs.push_back({name.text, dim});
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen);
    expect(Tok::LBrace);
    std::vector<StmtPtr> stmts;
    while (peek().kind != Tok::Return) stmts.push_back(stmt());
    p.body = seq_of(stmts);
    expect(Tok::Return);
    p.returns.push_back(expr());
    while (peek().kind == Tok::Comma) {
      next();
      p.returns.push_back(expr());
    }
    if (peek().kind == Tok::Semi) next();
    expect(Tok::RBrace);
    expect(Tok::End);
    return p;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect(Tok t) {
    if (peek().kind != t)
      throw ParseError(peek().line, peek().col,
                       std::string("expected ") + tok_name(t) + ", found " + tok_name(peek().kind) +
                           (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return next();
  }

  int int_literal(int min_value, const char* what) {
    Token t = expect(Tok::Number);
    Real r = t.num;
    int v = static_cast<int>(r);
    if (static_cast<Real>(v) != r || v < min_value)
      throw ParseError(t.line, t.col, std::string("invalid ") + what + " '" + t.text + "'");
    return v;
  }

  StmtPtr block() {
    expect(Tok::LBrace);
    std::vector<StmtPtr> stmts;
    while (peek().kind != Tok::RBrace) stmts.push_back(stmt());
    expect(Tok::RBrace);
    return seq_of(stmts);
  }

  StmtPtr stmt() {
    const Token& t = peek();
    if (t.kind == Tok::Skip) {
      next();
      expect(Tok::Semi);
      return skip_stmt();
    }
    if (t.kind == Tok::If) {
      next();
      expect(Tok::LParen);
      ExprPtr lhs = expr();
      CmpOp cmp;
      if (peek().kind == Tok::Lt) cmp = CmpOp::Lt;
      else if (peek().kind == Tok::Gt) cmp = CmpOp::Gt;
      else
        throw ParseError(peek().line, peek().col, "expected '<' or '>' in condition");
      next();
      ExprPtr rhs = expr();
      expect(Tok::RParen);
      StmtPtr then_b = block();
      expect(Tok::Else);
      StmtPtr else_b = block();
      return if_stmt(std::move(lhs), cmp, std::move(rhs), std::move(then_b), std::move(else_b));
    }
    if (t.kind == Tok::Ident) {
      Token name = next();
      int target_index = -1;
      if (peek().kind == Tok::LBracket) {
        next();
        int k = int_literal(0, "index");
        expect(Tok::RBracket);
        if (peek().kind == Tok::Semi) {
          next();
          if (k < 1)
            throw ParseError(name.line, name.col, "vector length must be at least 1");
          return vector_decl_stmt(name.text, k);
        }
        target_index = k;
      }
      AssignOp op;
      switch (peek().kind) {
        case Tok::Assign: op = AssignOp::Set; break;
        case Tok::PlusEq: op = AssignOp::AddEq; break;
        case Tok::MinusEq: op = AssignOp::SubEq; break;
        case Tok::StarEq: op = AssignOp::MulEq; break;
        case Tok::SlashEq: op = AssignOp::DivEq; break;
        default:
          throw ParseError(peek().line, peek().col,
                           "expected assignment operator after '" + name.text + "'");
      }
      Token op_tok = next();
      ExprPtr e = expr();
      if (op == AssignOp::DivEq) require_const_divisor(e, op_tok);
      expect(Tok::Semi);
      return assign_stmt(name.text, std::move(e), op, target_index);
    }
    throw ParseError(t.line, t.col,
                     std::string("expected statement, found ") + tok_name(t.kind));
  }

  // Divisors must be literal constants (optionally negated).
  Real require_const_divisor(const ExprPtr& e, const Token& where) {
    const Expr* cur = e.get();
    Real sign = 1;
    while (cur->kind == ExprKind::Negate) {
      sign = -sign;
      cur = cur->args[0].get();
    }
    if (cur->kind != ExprKind::Constant)
      throw ParseError(where.line, where.col, "division requires a literal constant divisor");
    Real v = sign * cur->value;
    if (v == 0.0)
      throw ParseError(where.line, where.col, "division by zero");
    return v;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        next();
        e = add(std::move(e), term());
      } else if (peek().kind == Tok::Minus) {
        next();
        e = sub(std::move(e), term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (peek().kind == Tok::Star) {
        next();
        e = mul(std::move(e), unary());
      } else if (peek().kind == Tok::Slash) {
        Token slash = next();
        ExprPtr d = unary();
        e = div_const(std::move(e), require_const_divisor(d, slash));
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      ExprPtr e = unary();
      // Fold a negated literal so -2 means the constant -2, matching what
      // the printer emits for negative constants.
      if (e->kind == ExprKind::Constant) return constant(-e->value);
      return negate(std::move(e));
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (peek().kind == Tok::LBracket) {
      next();
      int k = int_literal(0, "index");
      expect(Tok::RBracket);
      e = index_of(std::move(e), k);
    }
    return e;
  }

  ExprPtr call_arg() {
    expect(Tok::LParen);
    ExprPtr e = expr();
    expect(Tok::RParen);
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = next();
        return constant(n.num);
      }
      case Tok::Ident: {
        Token n = next();
        return var(n.text);
      }
      case Tok::LParen: {
        next();
        ExprPtr e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::Sin:
        next();
        return sin_of(call_arg());
      case Tok::Cos:
        next();
        return cos_of(call_arg());
      case Tok::Exp:
        next();
        return exp_of(call_arg());
      case Tok::Log: {
        Token kw = next();
        expect(Tok::LBrace);
        Token base = expect(Tok::Number);
        if (!(base.num > 0))
          throw ParseError(base.line, base.col, "log base must be positive");
        expect(Tok::RBrace);
        return log_of(base.num, call_arg());
      }
      case Tok::LBracket: {
        next();
        std::vector<ExprPtr> elems;
        elems.push_back(expr());
        while (peek().kind == Tok::Comma) {
          next();
          elems.push_back(expr());
        }
        expect(Tok::RBracket);
        return vector_lit(std::move(elems));
      }
      default:
        throw ParseError(t.line, t.col,
                         std::string("expected expression, found ") + tok_name(t.kind));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(const std::string& source) { return Parser(lex(source)).program(); }

Program parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace turaco
