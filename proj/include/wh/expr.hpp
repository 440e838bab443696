#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wh {

enum class ExprKind { Number, Coord, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt };

/// Immutable scalar expression over the coordinates x0..x{n+1}.
///
/// Nodes are shared, so copying an Expr is cheap and subtrees may be reused
/// across derivatives. All operations are pure.
class Expr {
public:
    struct Node;

    Expr();  // the number 0

    static Expr number(double value);
    static Expr coord(int index);
    static Expr call(Func fn, Expr arg);
    static Expr binary(ExprKind kind, Expr lhs, Expr rhs);
    static Expr negate(Expr arg);

    [[nodiscard]] ExprKind kind() const;
    [[nodiscard]] double value() const;  // Number only
    [[nodiscard]] int index() const;     // Coord only
    [[nodiscard]] Func func() const;     // Call only
    [[nodiscard]] Expr lhs() const;      // binary ops, and the operand of Neg/Call
    [[nodiscard]] Expr rhs() const;

    [[nodiscard]] bool is_number() const { return kind() == ExprKind::Number; }
    [[nodiscard]] bool is_zero() const { return is_number() && value() == 0.0; }
    [[nodiscard]] bool is_one() const { return is_number() && value() == 1.0; }

    /// True when the coordinate with this index occurs anywhere in the tree.
    [[nodiscard]] bool depends_on(int index) const;
    /// Largest coordinate index referenced, or -1 for constant expressions.
    [[nodiscard]] int max_coord() const;

    /// Structural equality (same tree shape, same literals bit-for-bit).
    [[nodiscard]] bool same_as(const Expr& other) const;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);

/// Parse `text` with standard precedence: `^` (right assoc) binds tighter than
/// unary minus, which binds tighter than `* /`, then `+ -` (left assoc).
///
/// Coordinates are written x0..x{n+1}; `aliases` maps extra identifiers to
/// coordinate indices (u -> 0, v -> n+1 by convention). Functions: sin cos exp
/// log sqrt. Constants: pi e.
Expr parse_expr(std::string_view text, int n,
                const std::unordered_map<std::string, int>& aliases = {});

/// Evaluate at `point` (length n+2). Throws DomainError instead of producing NaN.
double eval_expr(const Expr& e, std::span<const double> point);

/// Exact symbolic partial derivative with respect to coordinate `k`, simplified.
Expr diff_expr(const Expr& e, int k);

/// Constant folding plus 0/1 identity elimination. Not a canonical form.
Expr simplify(const Expr& e);

/// Text that parse_expr reads back to an expression with identical values.
std::string to_string(const Expr& e);

/// Flattened postfix form for repeated evaluation in inner loops.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    [[nodiscard]] double operator()(std::span<const double> point) const;
    [[nodiscard]] bool is_constant() const { return constant_; }

private:
    struct Op {
        ExprKind kind;
        Func fn;
        double value;
        int index;
    };
    void emit(const Expr& e);

    std::vector<Op> ops_;
    std::size_t max_depth_ = 0;
    bool constant_ = true;
};

}  // namespace wh
