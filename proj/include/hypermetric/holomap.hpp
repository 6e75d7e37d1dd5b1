#pragma once

#include <cstdint>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypermetric/dual.hpp"
#include "hypermetric/errors.hpp"
#include "hypermetric/types.hpp"

namespace hypermetric {

class Domain;

/// Denominators with modulus below this raise SingularityError.
inline constexpr double kSingularityFloor = 1e-300;

/// Immutable node of a rational expression over the coordinates z1..zn.
///
/// Copies share structure; an Expr is safe to evaluate concurrently.
class Expr {
 public:
  enum class Kind { Literal, Variable, Negate, Add, Subtract, Multiply, Divide, Power };

  static Expr literal(Complex value);
  /// Zero-based coordinate index (printed as z{index+1}).
  static Expr variable(int index);
  static Expr negate(Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  Kind kind() const { return node_->kind; }
  Complex value() const { return node_->value; }
  int index() const { return node_->index; }
  int exponent() const { return node_->exponent; }
  std::size_t arity() const { return node_->children.size(); }
  const Expr& child(std::size_t i) const { return node_->children[i]; }

  /// Largest zero-based variable index referenced, or -1 for constants.
  int max_variable() const;

  template <class Scalar>
  Scalar evaluate(std::span<const Scalar> vars) const;

 private:
  struct Node {
    Kind kind{};
    Complex value{};
    int index = 0;
    int exponent = 0;
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Structural equality (same tree shape, literals compared bitwise).
bool structurally_equal(const Expr& a, const Expr& b);

/// Fully parenthesized text that reparses to a structurally identical tree.
std::string to_string(const Expr& e);

/// A holomorphic (rational) map C^n -> C^m given by m expression trees.
class HoloMap {
 public:
  HoloMap(int input_dim, std::vector<Expr> components);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return static_cast<int>(components_.size()); }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& component(int i) const { return components_[static_cast<std::size_t>(i)]; }

  Point eval(const Point& p) const;
  /// f'(p)·v by forward-mode propagation of dual numbers.
  Vector jvp(const Point& p, const Vector& v) const;

  static HoloMap identity(int n);

 private:
  int input_dim_;
  std::vector<Expr> components_;
};

/// Parses "expr; expr; ..." over variables z1..zn. Throws SyntaxError.
HoloMap parse(std::string_view text, int n);

/// Parses a constant complex expression such as "1+2i" or "-0.5".
Complex parse_complex(std::string_view text);

/// Components joined by "; ".
std::string to_string(const HoloMap& f);

bool structurally_equal(const HoloMap& a, const HoloMap& b);

/// Tree substitution: compose(f, g)(p) = f(g(p)).
HoloMap compose(const HoloMap& f, const HoloMap& g);

/// Replaces variable z_{j+1} by replacements[j].
Expr substitute(const Expr& e, std::span<const Expr> replacements);

enum class RangeVerdict { Supported, Refuted, Inconclusive };

struct RangeEvidence {
  std::size_t checked = 0;
  /// Minimum over samples of the boundary distance of f(x) in the target;
  /// negative when some image escapes (-inf for a pole).
  double worst_margin = 0.0;
  RangeVerdict verdict = RangeVerdict::Inconclusive;
  /// A sample whose image escaped, when refuted.
  std::optional<Point> witness;
};

/// Sampled evidence that f maps `source` into `target` with margin `floor`.
RangeEvidence range_check(const HoloMap& f, const Domain& source, const Domain& target,
                          std::size_t samples = 512, std::uint64_t seed = 0,
                          double floor = 1e-6);

const char* to_string(RangeVerdict v);

// ---------------------------------------------------------------------------

namespace detail {

template <class Scalar>
Scalar int_power(Scalar base, int exponent) {
  Scalar result(Complex(1.0, 0.0));
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace detail

template <class Scalar>
Scalar Expr::evaluate(std::span<const Scalar> vars) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Literal:
      return Scalar(n.value);
    case Kind::Variable:
      return vars[static_cast<std::size_t>(n.index)];
    case Kind::Negate:
      return -n.children[0].evaluate(vars);
    case Kind::Add:
      return n.children[0].evaluate(vars) + n.children[1].evaluate(vars);
    case Kind::Subtract:
      return n.children[0].evaluate(vars) - n.children[1].evaluate(vars);
    case Kind::Multiply:
      return n.children[0].evaluate(vars) * n.children[1].evaluate(vars);
    case Kind::Divide: {
      Scalar num = n.children[0].evaluate(vars);
      Scalar den = n.children[1].evaluate(vars);
      if (!(std::abs(primal(den)) >= kSingularityFloor)) {
        throw SingularityError("division by zero while evaluating " + to_string(*this));
      }
      return num / den;
    }
    case Kind::Power:
      return detail::int_power(n.children[0].evaluate(vars), n.exponent);
  }
  return Scalar{};
}

}  // namespace hypermetric
