#include "hypermetric/holomap.hpp"

#include <cctype>
#include <charconv>
#include <climits>

namespace hypermetric {

// ---- Expr ------------------------------------------------------------------

Expr Expr::literal(Complex value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw ArgumentError("variable index must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  if (kind != Kind::Add && kind != Kind::Subtract && kind != Kind::Multiply &&
      kind != Kind::Divide) {
    throw ArgumentError("not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 0) throw ArgumentError("exponent must be a nonnegative integer");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->children.push_back(std::move(base));
  return Expr(std::move(n));
}

int Expr::max_variable() const {
  if (kind() == Kind::Variable) return index();
  int m = -1;
  for (const auto& c : node_->children) m = std::max(m, c.max_variable());
  return m;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind() || a.arity() != b.arity()) return false;
  switch (a.kind()) {
    case Expr::Kind::Literal:
      return a.value().real() == b.value().real() &&
             a.value().imag() == b.value().imag() &&
             std::signbit(a.value().real()) == std::signbit(b.value().real()) &&
             std::signbit(a.value().imag()) == std::signbit(b.value().imag());
    case Expr::Kind::Variable:
      return a.index() == b.index();
    case Expr::Kind::Power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  }
  return true;
}

namespace {

void append_double(std::string& out, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

void print(const Expr& e, std::string& out) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Literal: {
      const double re = e.value().real();
      const double im = e.value().imag();
      if (im == 0.0 && !std::signbit(im) && !std::signbit(re)) {
        append_double(out, re);
      } else if (re == 0.0 && !std::signbit(re) && !std::signbit(im)) {
        append_double(out, im);
        out += 'i';
      } else if (im == 0.0 && !std::signbit(im)) {
        out += "(-";
        append_double(out, std::abs(re));
        out += ')';
      } else {
        // Read back by the parser's literal folding of "a + bi".
        out += std::signbit(re) ? "(-" : "(";
        append_double(out, std::abs(re));
        out += std::signbit(im) ? " - " : " + ";
        append_double(out, std::abs(im));
        out += "i)";
      }
      return;
    }
    case K::Variable:
      out += 'z';
      out += std::to_string(e.index() + 1);
      return;
    case K::Negate:
      // "(-(2))" keeps a negated literal from folding into a negative one.
      out += e.child(0).kind() == K::Literal ? "(-(" : "(-";
      print(e.child(0), out);
      out += e.child(0).kind() == K::Literal ? "))" : ")";
      return;
    case K::Power:
      print(e.child(0), out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case K::Add:
    case K::Subtract:
    case K::Multiply:
    case K::Divide: {
      static constexpr const char* ops[] = {" + ", " - ", " * ", " / "};
      const int op = static_cast<int>(e.kind()) - static_cast<int>(K::Add);
      // Parenthesize a literal right operand of a literal so "1 + 2i"
      // built as a sum does not fold into one literal.
      const bool guard = op < 2 && e.child(0).kind() == K::Literal &&
                         e.child(1).kind() == K::Literal;
      out += '(';
      print(e.child(0), out);
      out += ops[op];
      if (guard) out += '(';
      print(e.child(1), out);
      if (guard) out += ')';
      out += ')';
      return;
    }
  }
}

// Recursive descent over
//   map     := expr (';' expr)*
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)*
//   primary := number ['i'] | 'i' | 'z' digits | '(' expr ')'
// Constant folding: '-' directly before a bare number (no '^') yields a
// negative literal, and "a + bi" / "a - bi" with a a bare real literal and
// bi a bare imaginary one yields a single complex literal.
class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  std::vector<Expr> parse_map() {
    std::vector<Expr> out;
    out.push_back(parse_expr());
    skip_ws();
    while (peek() == ';') {
      ++pos_;
      out.push_back(parse_expr());
      skip_ws();
    }
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw SyntaxError(what, at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  // An operand plus whether it is a bare (possibly negated) number token.
  struct Operand {
    Expr e;
    bool bare = false;
  };

  static bool real_literal(const Operand& o) {
    return o.bare && o.e.value().imag() == 0.0 && !std::signbit(o.e.value().imag());
  }
  static bool imaginary_literal(const Operand& o) {
    return o.bare && o.e.value().real() == 0.0 && !std::signbit(o.e.value().real());
  }

  Expr parse_expr() {
    Operand lhs = parse_term();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return lhs.e;
      ++pos_;
      Operand rhs = parse_term();
      if (real_literal(lhs) && imaginary_literal(rhs)) {
        const double im = rhs.e.value().imag();
        lhs = {Expr::literal(Complex(lhs.e.value().real(), c == '+' ? im : -im)), false};
        continue;
      }
      lhs = {Expr::binary(c == '+' ? Expr::Kind::Add : Expr::Kind::Subtract, std::move(lhs.e),
                          std::move(rhs.e)),
             false};
    }
  }

  Operand parse_term() {
    Operand lhs = parse_unary();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Operand rhs = parse_unary();
      lhs = {Expr::binary(c == '*' ? Expr::Kind::Multiply : Expr::Kind::Divide, std::move(lhs.e),
                          std::move(rhs.e)),
             false};
    }
  }

  Operand parse_unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      Operand inner = parse_unary();
      if (inner.bare) {
        // Keep +0 as the imaginary part of a negated real so it prints back.
        const Complex v = inner.e.value();
        return {Expr::literal(v.imag() == 0.0 ? Complex(-v.real(), 0.0) : -v), true};
      }
      return {Expr::negate(std::move(inner.e)), false};
    }
    if (peek() == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Operand parse_power() {
    Operand base = parse_primary();
    for (;;) {
      skip_ws();
      if (peek() != '^') return base;
      base.bare = false;
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        fail("exponent is not a nonnegative integer");
      }
      long long value = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        value = value * 10 + (text_[pos_] - '0');
        if (value > INT_MAX) fail_at("exponent too large", start);
        ++pos_;
      }
      if (peek() == '.' || peek() == 'e' || peek() == 'E' || peek() == 'i') {
        fail_at("exponent is not a nonnegative integer", start);
      }
      base.e = Expr::power(std::move(base.e), static_cast<int>(value));
    }
  }

  Operand parse_primary() {
    skip_ws();
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return {std::move(inner), false};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return {parse_number(), true};
    if (c == 'i' && !is_ident_char(pos_ + 1)) {
      ++pos_;
      return {Expr::literal(Complex(0.0, 1.0)), true};
    }
    if (c == 'z') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail_at("unknown identifier", start);
      long long idx = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        idx = idx * 10 + (text_[pos_] - '0');
        if (idx > INT_MAX) fail_at("unknown variable", start);
        ++pos_;
      }
      if (is_ident_char(pos_)) fail_at("unknown identifier", start);
      if (idx < 1 || idx > n_) {
        fail_at("unknown variable z" + std::to_string(idx) + " (map has " + std::to_string(n_) +
                    " variables)",
                start);
      }
      return {Expr::variable(static_cast<int>(idx - 1)), false};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') fail("unknown identifier");
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  bool is_ident_char(std::size_t at) const {
    if (at >= text_.size()) return false;
    const char c = text_[at];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      fail_at("malformed number", start);
    }
    if (!std::isfinite(value)) fail_at("number out of range", start);
    bool imaginary = false;
    if (peek() == 'i' && !is_ident_char(pos_ + 1)) {
      ++pos_;
      imaginary = true;
    }
    if (is_ident_char(pos_)) fail("unexpected character '" + std::string(1, peek()) + "'");
    return Expr::literal(imaginary ? Complex(0.0, value) : Complex(value, 0.0));
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---- HoloMap ---------------------------------------------------------------

HoloMap::HoloMap(int input_dim, std::vector<Expr> components)
    : input_dim_(input_dim), components_(std::move(components)) {
  if (input_dim_ < 0) throw ArgumentError("input dimension must be nonnegative");
  if (components_.empty()) throw ArgumentError("a map needs at least one component");
  for (const auto& c : components_) {
    if (c.max_variable() >= input_dim_) {
      throw ArgumentError("component references z" + std::to_string(c.max_variable() + 1) +
                          " but the map has " + std::to_string(input_dim_) + " variables");
    }
  }
}

HoloMap HoloMap::identity(int n) {
  std::vector<Expr> comps;
  for (int j = 0; j < n; ++j) comps.push_back(Expr::variable(j));
  return HoloMap(n, std::move(comps));
}

Point HoloMap::eval(const Point& p) const {
  if (p.size() != input_dim_) {
    throw ArgumentError("eval: point has dimension " + std::to_string(p.size()) +
                        ", map expects " + std::to_string(input_dim_));
  }
  if (!all_finite(p)) throw ArgumentError("eval: point has a non-finite coordinate");
  std::span<const Complex> vars(p.data(), static_cast<std::size_t>(p.size()));
  Point out(output_dim());
  for (int i = 0; i < output_dim(); ++i) out[i] = component(i).evaluate(vars);
  return out;
}

Vector HoloMap::jvp(const Point& p, const Vector& v) const {
  if (p.size() != input_dim_ || v.size() != input_dim_) {
    throw ArgumentError("jvp: point/vector dimension does not match the map");
  }
  if (!all_finite(p) || !all_finite(v)) {
    throw ArgumentError("jvp: point or vector has a non-finite coordinate");
  }
  std::vector<Dual<Complex>> vars(static_cast<std::size_t>(input_dim_));
  for (int j = 0; j < input_dim_; ++j) vars[static_cast<std::size_t>(j)] = {p[j], v[j]};
  std::span<const Dual<Complex>> view(vars);
  Vector out(output_dim());
  for (int i = 0; i < output_dim(); ++i) out[i] = component(i).evaluate(view).eps;
  return out;
}

HoloMap parse(std::string_view text, int n) {
  if (n < 1) throw ArgumentError("map dimension must be at least 1");
  Parser parser(text, n);
  return HoloMap(n, parser.parse_map());
}

Complex parse_complex(std::string_view text) {
  Parser parser(text, 0);
  auto comps = parser.parse_map();
  if (comps.size() != 1) throw SyntaxError("expected a single complex value", 0);
  return comps[0].evaluate(std::span<const Complex>());
}

std::string to_string(const HoloMap& f) {
  std::string out;
  for (int i = 0; i < f.output_dim(); ++i) {
    if (i > 0) out += "; ";
    out += to_string(f.component(i));
  }
  return out;
}

bool structurally_equal(const HoloMap& a, const HoloMap& b) {
  if (a.input_dim() != b.input_dim() || a.output_dim() != b.output_dim()) return false;
  for (int i = 0; i < a.output_dim(); ++i) {
    if (!structurally_equal(a.component(i), b.component(i))) return false;
  }
  return true;
}

Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Literal:
      return e;
    case K::Variable:
      return replacements[static_cast<std::size_t>(e.index())];
    case K::Negate:
      return Expr::negate(substitute(e.child(0), replacements));
    case K::Power:
      return Expr::power(substitute(e.child(0), replacements), e.exponent());
    default:
      return Expr::binary(e.kind(), substitute(e.child(0), replacements),
                          substitute(e.child(1), replacements));
  }
}

HoloMap compose(const HoloMap& f, const HoloMap& g) {
  if (g.output_dim() != f.input_dim()) {
    throw ArgumentError("compose: inner map has " + std::to_string(g.output_dim()) +
                        " outputs, outer map expects " + std::to_string(f.input_dim()));
  }
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(f.output_dim()));
  for (const auto& c : f.components()) comps.push_back(substitute(c, g.components()));
  return HoloMap(g.input_dim(), std::move(comps));
}

const char* to_string(RangeVerdict v) {
  switch (v) {
    case RangeVerdict::Supported:
      return "supported";
    case RangeVerdict::Refuted:
      return "refuted";
    case RangeVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

}  // namespace hypermetric
