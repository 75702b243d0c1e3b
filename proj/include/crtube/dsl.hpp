#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "crtube/fields.hpp"
#include "crtube/germs.hpp"
#include "crtube/series.hpp"

namespace crtube {
namespace dsl {

/// Parse or evaluation failure, with 1-based line/column of the offending
/// token and, for semantic errors, the offending subexpression.
struct Error : std::runtime_error {
  Error(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Symbol, Neg, Add, Sub, Mul, Pow, Conj, Inv };
  Kind kind;
  Rational number;     // Number
  std::string symbol;  // Symbol
  Ast lhs, rhs;        // children (rhs unused for unary)
  int power = 0;       // Pow
  int line = 1, col = 1;
};

bool equal(const Ast& a, const Ast& b);

/// Grammar:
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ('^' INT)?
///   atom   := RATIONAL | 'I' | 'SQRT2' | VAR | 'conj(' expr ')'
///           | 'inv(' expr ')' | '(' expr ')'
Ast parse(const std::string& text);

std::string pretty(const Ast& ast);

/// Evaluates in the restricted ring over nz holomorphic coordinates:
/// symbols z1..z<nz>, conj(...) for the conjugates, and v.
TruncatedSeries evalSeries(const Ast& ast, int nz, int cutoff);

/// Evaluates a field expression over (w, z1, z2) with component markers
/// Dw, Dz1, Dz2. conj/inv are rejected; every additive term must carry
/// exactly one marker to the first power.
HoloVectorField evalField(const Ast& ast);

/// Convenience: parse + validate a germ defining series.
HypersurfaceGerm parseGerm(const std::string& text, int nz, int cutoff,
                           bool requireNormalForm);

/// Convenience: parse a field expression.
HoloVectorField parseField(const std::string& text);

}  // namespace dsl
}  // namespace crtube
