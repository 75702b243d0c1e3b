#include "crtube/dsl.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <vector>

namespace crtube {
namespace dsl {

namespace {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };
  Kind kind;
  std::string text;
  int line, col;
};

struct Lexer {
  explicit Lexer(const std::string& s) : src(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpace();
      if (pos >= src.size()) {
        out.push_back({Token::Kind::End, "", line, col});
        return out;
      }
      char c = src[pos];
      int startLine = line, startCol = col;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num = readDigits();
        if (pos < src.size() && src[pos] == '/') {
          // Rational literal p/q; '/' appears only inside literals.
          advance();
          if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw Error("expected denominator digits after '/'", line, col);
          num += "/" + readDigits();
        }
        out.push_back({Token::Kind::Number, num, startLine, startCol});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string id;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
          id += src[pos];
          advance();
        }
        out.push_back({Token::Kind::Ident, id, startLine, startCol});
        continue;
      }
      Token::Kind kind;
      switch (c) {
        case '+': kind = Token::Kind::Plus; break;
        case '-': kind = Token::Kind::Minus; break;
        case '*': kind = Token::Kind::Star; break;
        case '^': kind = Token::Kind::Caret; break;
        case '(': kind = Token::Kind::LParen; break;
        case ')': kind = Token::Kind::RParen; break;
        default:
          throw Error(std::string("unexpected character '") + c + "'", line, col);
      }
      out.push_back({kind, std::string(1, c), startLine, startCol});
      advance();
    }
  }

private:
  void skipSpace() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos]))) advance();
  }
  std::string readDigits() {
    std::string d;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      d += src[pos];
      advance();
    }
    return d;
  }
  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
};

struct Parser {
  explicit Parser(std::vector<Token> t) : tokens(std::move(t)) {}

  Ast run() {
    Ast e = expr();
    expect(Token::Kind::End, "trailing input after expression");
    return e;
  }

private:
  const Token& peek() const { return tokens[idx]; }
  Token take() { return tokens[idx++]; }
  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) throw Error(what, peek().line, peek().col);
    take();
  }

  static Ast mk(Node n) { return std::make_shared<Node>(std::move(n)); }
  Ast node(Node::Kind k, Ast lhs, Ast rhs, const Token& at) {
    Node n;
    n.kind = k;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    n.line = at.line;
    n.col = at.col;
    return mk(std::move(n));
  }

  Ast expr() {
    Ast acc;
    if (peek().kind == Token::Kind::Minus) {
      Token minus = take();
      Ast t = term();
      Node n;
      n.kind = Node::Kind::Neg;
      n.lhs = t;
      n.line = minus.line;
      n.col = minus.col;
      acc = mk(std::move(n));
    } else {
      acc = term();
    }
    while (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
      Token op = take();
      Ast rhs = term();
      acc = node(op.kind == Token::Kind::Plus ? Node::Kind::Add : Node::Kind::Sub, acc, rhs, op);
    }
    return acc;
  }

  Ast term() {
    Ast acc = factor();
    while (peek().kind == Token::Kind::Star) {
      Token op = take();
      acc = node(Node::Kind::Mul, acc, factor(), op);
    }
    return acc;
  }

  Ast factor() {
    Ast base = atom();
    if (peek().kind == Token::Kind::Caret) {
      Token op = take();
      if (peek().kind != Token::Kind::Number || peek().text.find('/') != std::string::npos)
        throw Error("exponent must be a nonnegative integer", peek().line, peek().col);
      Token e = take();
      Node n;
      n.kind = Node::Kind::Pow;
      n.lhs = base;
      n.power = std::stoi(e.text);
      n.line = op.line;
      n.col = op.col;
      return mk(std::move(n));
    }
    return base;
  }

  Ast atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      Token num = take();
      Node n;
      n.kind = Node::Kind::Number;
      n.number = Rational::fromString(num.text);
      n.line = num.line;
      n.col = num.col;
      return mk(std::move(n));
    }
    if (t.kind == Token::Kind::Ident) {
      Token id = take();
      if (id.text == "conj" || id.text == "inv") {
        expect(Token::Kind::LParen, "expected '(' after " + id.text);
        Ast inner = expr();
        expect(Token::Kind::RParen, "expected ')'");
        Node n;
        n.kind = id.text == "conj" ? Node::Kind::Conj : Node::Kind::Inv;
        n.lhs = inner;
        n.line = id.line;
        n.col = id.col;
        return mk(std::move(n));
      }
      Node n;
      n.kind = Node::Kind::Symbol;
      n.symbol = id.text;
      n.line = id.line;
      n.col = id.col;
      return mk(std::move(n));
    }
    if (t.kind == Token::Kind::LParen) {
      take();
      Ast inner = expr();
      expect(Token::Kind::RParen, "expected ')'");
      return inner;
    }
    throw Error("expected a number, symbol or '('", t.line, t.col);
  }

  std::vector<Token> tokens;
  size_t idx = 0;
};

int precedence(Node::Kind k) {
  switch (k) {
    case Node::Kind::Add:
    case Node::Kind::Sub:
    case Node::Kind::Neg: return 1;
    case Node::Kind::Mul: return 2;
    case Node::Kind::Pow: return 3;
    default: return 4;
  }
}

void prettyRec(const Ast& a, std::string& out, int parentPrec) {
  int prec = precedence(a->kind);
  bool paren = prec < parentPrec;
  if (paren) out += "(";
  switch (a->kind) {
    case Node::Kind::Number: out += a->number.str(); break;
    case Node::Kind::Symbol: out += a->symbol; break;
    case Node::Kind::Neg:
      out += "-";
      prettyRec(a->lhs, out, 2);
      break;
    case Node::Kind::Add:
      prettyRec(a->lhs, out, 1);
      out += " + ";
      prettyRec(a->rhs, out, 2);
      break;
    case Node::Kind::Sub:
      prettyRec(a->lhs, out, 1);
      out += " - ";
      prettyRec(a->rhs, out, 2);
      break;
    case Node::Kind::Mul:
      prettyRec(a->lhs, out, 2);
      out += "*";
      prettyRec(a->rhs, out, 3);
      break;
    case Node::Kind::Pow:
      prettyRec(a->lhs, out, 4);
      out += "^" + std::to_string(a->power);
      break;
    case Node::Kind::Conj:
      out += "conj(";
      prettyRec(a->lhs, out, 0);
      out += ")";
      break;
    case Node::Kind::Inv:
      out += "inv(";
      prettyRec(a->lhs, out, 0);
      out += ")";
      break;
  }
  if (paren) out += ")";
}

}  // namespace

bool equal(const Ast& a, const Ast& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Kind::Number: return a->number == b->number;
    case Node::Kind::Symbol: return a->symbol == b->symbol;
    case Node::Kind::Pow: return a->power == b->power && equal(a->lhs, b->lhs);
    case Node::Kind::Neg:
    case Node::Kind::Conj:
    case Node::Kind::Inv: return equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

Ast parse(const std::string& text) { return Parser(Lexer(text).run()).run(); }

std::string pretty(const Ast& ast) {
  std::string out;
  prettyRec(ast, out, 0);
  return out;
}

namespace {

TruncatedSeries evalSeriesRec(const Ast& a, const VarSet& vars, int cutoff) {
  switch (a->kind) {
    case Node::Kind::Number:
      return TruncatedSeries::constant(vars, cutoff, Scalar(a->number));
    case Node::Kind::Symbol: {
      if (a->symbol == "I") return TruncatedSeries::constant(vars, cutoff, Scalar::i());
      if (a->symbol == "SQRT2")
        return TruncatedSeries::constant(vars, cutoff, Scalar::sqrt2());
      if (a->symbol == "v") return TruncatedSeries::generator(vars, cutoff, vars.vIdx());
      if (a->symbol.size() >= 2 && a->symbol[0] == 'z') {
        int j = std::atoi(a->symbol.c_str() + 1);
        if (j >= 1 && j <= vars.nz)
          return TruncatedSeries::generator(vars, cutoff, vars.zIdx(j - 1));
      }
      throw Error("unknown symbol '" + a->symbol + "'", a->line, a->col);
    }
    case Node::Kind::Neg: return -evalSeriesRec(a->lhs, vars, cutoff);
    case Node::Kind::Add:
      return evalSeriesRec(a->lhs, vars, cutoff) + evalSeriesRec(a->rhs, vars, cutoff);
    case Node::Kind::Sub:
      return evalSeriesRec(a->lhs, vars, cutoff) - evalSeriesRec(a->rhs, vars, cutoff);
    case Node::Kind::Mul:
      return evalSeriesRec(a->lhs, vars, cutoff) * evalSeriesRec(a->rhs, vars, cutoff);
    case Node::Kind::Pow: {
      TruncatedSeries base = evalSeriesRec(a->lhs, vars, cutoff);
      TruncatedSeries acc = TruncatedSeries::constant(vars, cutoff, Scalar(1));
      for (int n = 0; n < a->power; ++n) acc = acc * base;
      return acc;
    }
    case Node::Kind::Conj: return evalSeriesRec(a->lhs, vars, cutoff).conjugate();
    case Node::Kind::Inv: {
      TruncatedSeries inner = evalSeriesRec(a->lhs, vars, cutoff);
      try {
        return inner.inverse();
      } catch (const std::domain_error&) {
        throw Error("non-unit series in inv(): " + pretty(a->lhs), a->line, a->col);
      }
    }
  }
  throw Error("unreachable", a->line, a->col);
}

}  // namespace

TruncatedSeries evalSeries(const Ast& ast, int nz, int cutoff) {
  return evalSeriesRec(ast, VarSet{nz, false}, cutoff);
}

HoloVectorField evalField(const Ast& ast) {
  // Evaluate over a scratch ring whose "holomorphic" generators are
  // w, z1, z2 and the three markers Dw, Dz1, Dz2.
  const VarSet scratch{6, false};
  const int cutoff = 24;
  std::function<TruncatedSeries(const Ast&)> rec = [&](const Ast& a) -> TruncatedSeries {
    switch (a->kind) {
      case Node::Kind::Number:
        return TruncatedSeries::constant(scratch, cutoff, Scalar(a->number));
      case Node::Kind::Symbol: {
        if (a->symbol == "I") return TruncatedSeries::constant(scratch, cutoff, Scalar::i());
        if (a->symbol == "SQRT2")
          return TruncatedSeries::constant(scratch, cutoff, Scalar::sqrt2());
        static const char* names[6] = {"w", "z1", "z2", "Dw", "Dz1", "Dz2"};
        for (int j = 0; j < 6; ++j)
          if (a->symbol == names[j])
            return TruncatedSeries::generator(scratch, cutoff, scratch.zIdx(j));
        throw Error("unknown symbol '" + a->symbol + "' in field expression", a->line, a->col);
      }
      case Node::Kind::Neg: return -rec(a->lhs);
      case Node::Kind::Add: return rec(a->lhs) + rec(a->rhs);
      case Node::Kind::Sub: return rec(a->lhs) - rec(a->rhs);
      case Node::Kind::Mul: return rec(a->lhs) * rec(a->rhs);
      case Node::Kind::Pow: {
        TruncatedSeries base = rec(a->lhs);
        TruncatedSeries acc = TruncatedSeries::constant(scratch, cutoff, Scalar(1));
        for (int n = 0; n < a->power; ++n) acc = acc * base;
        return acc;
      }
      case Node::Kind::Conj:
        throw Error("conj() is not allowed in field expressions", a->line, a->col);
      case Node::Kind::Inv:
        throw Error("inv() is not allowed in field expressions", a->line, a->col);
    }
    throw Error("unreachable", a->line, a->col);
  };
  TruncatedSeries s = rec(ast);

  HoloVectorField field(3, true);
  for (const auto& [e, c] : s.terms()) {
    int markerTotal = e[scratch.zIdx(3)] + e[scratch.zIdx(4)] + e[scratch.zIdx(5)];
    if (markerTotal == 0)
      throw Error("scalar term where field component expected", ast->line, ast->col);
    if (markerTotal > 1)
      throw Error("product of field component markers", ast->line, ast->col);
    int k = e[scratch.zIdx(3)] ? 0 : (e[scratch.zIdx(4)] ? 1 : 2);
    PExpo pe{e[scratch.zIdx(0)], e[scratch.zIdx(1)], e[scratch.zIdx(2)]};
    field.comps[k] = field.comps[k] + HoloPoly::monomial(3, pe, c);
  }
  return field;
}

HypersurfaceGerm parseGerm(const std::string& text, int nz, int cutoff,
                           bool requireNormalForm) {
  Ast ast = parse(text);
  TruncatedSeries rho = evalSeries(ast, nz, cutoff);
  try {
    return HypersurfaceGerm::make(rho, requireNormalForm);
  } catch (const std::domain_error& err) {
    throw Error(std::string(err.what()) + ": " + pretty(ast), ast->line, ast->col);
  }
}

HoloVectorField parseField(const std::string& text) { return evalField(parse(text)); }

}  // namespace dsl
}  // namespace crtube
