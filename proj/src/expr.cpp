#include "wh/expr.hpp"

#include "wh/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace wh {

struct Expr::Node {
    ExprKind kind = ExprKind::Number;
    double value = 0.0;
    int index = 0;
    Func fn = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

const char* func_name(Func fn)
{
    switch (fn) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

double apply_func(Func fn, double x)
{
    switch (fn) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Exp: return std::exp(x);
    case Func::Log:
        if (!(x > 0.0)) throw DomainError("log of nonpositive value " + std::to_string(x));
        return std::log(x);
    case Func::Sqrt:
        if (x < 0.0) throw DomainError("sqrt of negative value " + std::to_string(x));
        return std::sqrt(x);
    }
    return 0.0;
}

double apply_binary(ExprKind kind, double a, double b)
{
    switch (kind) {
    case ExprKind::Add: return a + b;
    case ExprKind::Sub: return a - b;
    case ExprKind::Mul: return a * b;
    case ExprKind::Div:
        if (b == 0.0) throw DomainError("division by zero");
        return a / b;
    case ExprKind::Pow:
        if (a < 0.0 && b != std::trunc(b))
            throw DomainError("negative base raised to non-integer power");
        if (a == 0.0 && b < 0.0) throw DomainError("zero raised to negative power");
        return std::pow(a, b);
    default: return 0.0;
    }
}

double checked(double v)
{
    if (!std::isfinite(v)) throw DomainError("non-finite intermediate value");
    return v;
}

bool is_binary(ExprKind k)
{
    return k == ExprKind::Add || k == ExprKind::Sub || k == ExprKind::Mul ||
           k == ExprKind::Div || k == ExprKind::Pow;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::number(double value)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Number;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::coord(int index)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Coord;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::call(Func fn, Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Call;
    n->fn = fn;
    n->lhs = std::move(arg.node_);
    return Expr(std::move(n));
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs.node_);
    n->rhs = std::move(rhs.node_);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Neg;
    n->lhs = std::move(arg.node_);
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
Func Expr::func() const { return node_->fn; }
Expr Expr::lhs() const { return Expr(node_->lhs); }
Expr Expr::rhs() const { return Expr(node_->rhs); }

bool Expr::depends_on(int index) const
{
    switch (kind()) {
    case ExprKind::Number: return false;
    case ExprKind::Coord: return this->index() == index;
    case ExprKind::Neg:
    case ExprKind::Call: return lhs().depends_on(index);
    default: return lhs().depends_on(index) || rhs().depends_on(index);
    }
}

int Expr::max_coord() const
{
    switch (kind()) {
    case ExprKind::Number: return -1;
    case ExprKind::Coord: return index();
    case ExprKind::Neg:
    case ExprKind::Call: return lhs().max_coord();
    default: return std::max(lhs().max_coord(), rhs().max_coord());
    }
}

bool Expr::same_as(const Expr& other) const
{
    if (node_ == other.node_) return true;
    if (kind() != other.kind()) return false;
    switch (kind()) {
    case ExprKind::Number: return value() == other.value();
    case ExprKind::Coord: return index() == other.index();
    case ExprKind::Neg: return lhs().same_as(other.lhs());
    case ExprKind::Call: return func() == other.func() && lhs().same_as(other.lhs());
    default: return lhs().same_as(other.lhs()) && rhs().same_as(other.rhs());
    }
}

// Simplifying constructors. Folding is skipped whenever it would raise or
// produce a non-finite number, so the domain error surfaces at evaluation.

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_number() && b.is_number()) return Expr::number(a.value() + b.value());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (b.kind() == ExprKind::Neg) return Expr::binary(ExprKind::Sub, a, b.lhs());
    return Expr::binary(ExprKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b)
{
    if (a.is_number() && b.is_number()) return Expr::number(a.value() - b.value());
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (b.kind() == ExprKind::Neg) return Expr::binary(ExprKind::Add, a, b.lhs());
    return Expr::binary(ExprKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_number() && b.is_number()) return Expr::number(a.value() * b.value());
    if (a.is_zero() || b.is_zero()) return Expr::number(0.0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_number() && a.value() == -1.0) return -b;
    if (b.is_number() && b.value() == -1.0) return -a;
    return Expr::binary(ExprKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (a.is_number() && b.is_number() && b.value() != 0.0)
        return Expr::number(a.value() / b.value());
    if (a.is_zero() && !b.is_zero()) return Expr::number(0.0);
    if (b.is_one()) return a;
    return Expr::binary(ExprKind::Div, a, b);
}

Expr operator-(const Expr& a)
{
    if (a.is_number()) return Expr::number(-a.value());
    if (a.kind() == ExprKind::Neg) return a.lhs();
    return Expr::negate(a);
}

Expr pow(const Expr& base, const Expr& exponent)
{
    if (exponent.is_zero()) return Expr::number(1.0);
    if (exponent.is_one()) return base;
    if (base.is_number() && exponent.is_number()) {
        try {
            const double v = apply_binary(ExprKind::Pow, base.value(), exponent.value());
            if (std::isfinite(v)) return Expr::number(v);
        } catch (const DomainError&) {
        }
    }
    return Expr::binary(ExprKind::Pow, base, exponent);
}

namespace {

Expr make_call(Func fn, const Expr& arg)
{
    if (arg.is_number()) {
        try {
            const double v = apply_func(fn, arg.value());
            if (std::isfinite(v)) return Expr::number(v);
        } catch (const DomainError&) {
        }
    }
    return Expr::call(fn, arg);
}

Expr rebuild(ExprKind kind, const Expr& a, const Expr& b)
{
    switch (kind) {
    case ExprKind::Add: return a + b;
    case ExprKind::Sub: return a - b;
    case ExprKind::Mul: return a * b;
    case ExprKind::Div: return a / b;
    case ExprKind::Pow: return pow(a, b);
    default: return a;
    }
}

}  // namespace

Expr simplify(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Number:
    case ExprKind::Coord: return e;
    case ExprKind::Neg: return -simplify(e.lhs());
    case ExprKind::Call: return make_call(e.func(), simplify(e.lhs()));
    default: return rebuild(e.kind(), simplify(e.lhs()), simplify(e.rhs()));
    }
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff_expr(const Expr& e, int k)
{
    if (!e.depends_on(k)) return Expr::number(0.0);
    switch (e.kind()) {
    case ExprKind::Number: return Expr::number(0.0);
    case ExprKind::Coord: return Expr::number(e.index() == k ? 1.0 : 0.0);
    case ExprKind::Neg: return -diff_expr(e.lhs(), k);
    case ExprKind::Add: return diff_expr(e.lhs(), k) + diff_expr(e.rhs(), k);
    case ExprKind::Sub: return diff_expr(e.lhs(), k) - diff_expr(e.rhs(), k);
    case ExprKind::Mul: {
        const Expr a = e.lhs(), b = e.rhs();
        return diff_expr(a, k) * b + a * diff_expr(b, k);
    }
    case ExprKind::Div: {
        const Expr a = e.lhs(), b = e.rhs();
        const Expr da = diff_expr(a, k), db = diff_expr(b, k);
        if (db.is_zero()) return da / b;
        return (da * b - a * db) / pow(b, Expr::number(2.0));
    }
    case ExprKind::Pow: {
        const Expr a = e.lhs(), b = e.rhs();
        if (!b.depends_on(k)) {
            const Expr lowered = b.is_number() ? Expr::number(b.value() - 1.0)
                                               : b - Expr::number(1.0);
            return b * pow(a, lowered) * diff_expr(a, k);
        }
        if (!a.depends_on(k)) return e * make_call(Func::Log, a) * diff_expr(b, k);
        return e * (diff_expr(b, k) * make_call(Func::Log, a) + b * diff_expr(a, k) / a);
    }
    case ExprKind::Call: {
        const Expr a = e.lhs();
        const Expr da = diff_expr(a, k);
        switch (e.func()) {
        case Func::Sin: return make_call(Func::Cos, a) * da;
        case Func::Cos: return -(make_call(Func::Sin, a) * da);
        case Func::Exp: return e * da;
        case Func::Log: return da / a;
        case Func::Sqrt: return da / (Expr::number(2.0) * e);
        }
    }
    }
    return Expr::number(0.0);
}

// ---------------------------------------------------------------------------
// Evaluation

double eval_expr(const Expr& e, std::span<const double> point)
{
    switch (e.kind()) {
    case ExprKind::Number: return e.value();
    case ExprKind::Coord:
        if (static_cast<std::size_t>(e.index()) >= point.size())
            throw DomainError("point has no coordinate x" + std::to_string(e.index()));
        return point[static_cast<std::size_t>(e.index())];
    case ExprKind::Neg: return -eval_expr(e.lhs(), point);
    case ExprKind::Call: return checked(apply_func(e.func(), eval_expr(e.lhs(), point)));
    default:
        return checked(apply_binary(e.kind(), eval_expr(e.lhs(), point), eval_expr(e.rhs(), point)));
    }
}

CompiledExpr::CompiledExpr(const Expr& e)
{
    emit(e);
    std::size_t depth = 0;
    for (const Op& op : ops_) {
        if (op.kind == ExprKind::Number || op.kind == ExprKind::Coord) {
            ++depth;
        } else if (is_binary(op.kind)) {
            --depth;
        }
        max_depth_ = std::max(max_depth_, depth);
    }
}

void CompiledExpr::emit(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Number: ops_.push_back({e.kind(), Func::Sin, e.value(), 0}); return;
    case ExprKind::Coord:
        constant_ = false;
        ops_.push_back({e.kind(), Func::Sin, 0.0, e.index()});
        return;
    case ExprKind::Neg:
    case ExprKind::Call:
        emit(e.lhs());
        ops_.push_back({e.kind(), e.kind() == ExprKind::Call ? e.func() : Func::Sin, 0.0, 0});
        return;
    default:
        emit(e.lhs());
        emit(e.rhs());
        ops_.push_back({e.kind(), Func::Sin, 0.0, 0});
        return;
    }
}

double CompiledExpr::operator()(std::span<const double> point) const
{
    if (ops_.empty()) return 0.0;
    std::array<double, 64> small{};
    std::vector<double> large;
    double* stack = small.data();
    if (max_depth_ > small.size()) {
        large.resize(max_depth_);
        stack = large.data();
    }
    std::size_t top = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
        case ExprKind::Number: stack[top++] = op.value; break;
        case ExprKind::Coord:
            if (static_cast<std::size_t>(op.index) >= point.size())
                throw DomainError("point has no coordinate x" + std::to_string(op.index));
            stack[top++] = point[static_cast<std::size_t>(op.index)];
            break;
        case ExprKind::Neg: stack[top - 1] = -stack[top - 1]; break;
        case ExprKind::Call: stack[top - 1] = checked(apply_func(op.fn, stack[top - 1])); break;
        default:
            --top;
            stack[top - 1] = checked(apply_binary(op.kind, stack[top - 1], stack[top]));
            break;
        }
    }
    return stack[0];
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Number: return e.value() < 0.0 || std::signbit(e.value()) ? kPrecNeg : kPrecAtom;
    case ExprKind::Coord:
    case ExprKind::Call: return kPrecAtom;
    case ExprKind::Add:
    case ExprKind::Sub: return kPrecAdd;
    case ExprKind::Mul:
    case ExprKind::Div: return kPrecMul;
    case ExprKind::Neg: return kPrecNeg;
    case ExprKind::Pow: return kPrecPow;
    }
    return kPrecAtom;
}

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

std::string print(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Number: return format_number(e.value());
    case ExprKind::Coord: return "x" + std::to_string(e.index());
    case ExprKind::Call: return std::string(func_name(e.func())) + "(" + print(e.lhs()) + ")";
    case ExprKind::Neg: {
        const Expr a = e.lhs();
        return "-" + wrap(print(a), precedence(a) <= kPrecNeg);
    }
    default: break;
    }
    const Expr a = e.lhs(), b = e.rhs();
    const int p = precedence(e);
    const int pa = precedence(a), pb = precedence(b);
    switch (e.kind()) {
    case ExprKind::Add: return print(a) + " + " + wrap(print(b), pb <= kPrecAdd || pb == kPrecNeg);
    case ExprKind::Sub: return print(a) + " - " + wrap(print(b), pb <= p || pb == kPrecNeg);
    case ExprKind::Mul:
        return wrap(print(a), pa < p) + "*" + wrap(print(b), pb <= kPrecNeg && pb != kPrecAtom);
    case ExprKind::Div:
        return wrap(print(a), pa < p) + "/" + wrap(print(b), pb <= kPrecNeg);
    case ExprKind::Pow:
        return wrap(print(a), pa <= kPrecPow) + "^" + wrap(print(b), pb != kPrecAtom);
    default: return {};
    }
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, int n, const std::unordered_map<std::string, int>& aliases)
        : text_(text), n_(n), aliases_(aliases) {}

    Expr parse()
    {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum()
    {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(ExprKind::Add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = Expr::binary(ExprKind::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product()
    {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(ExprKind::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprKind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (accept('^')) return Expr::binary(ExprKind::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
                pos_ = q;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(v))
            throw ParseError("malformed number", start);
        return Expr::number(v);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        static const std::array<std::pair<const char*, Func>, 5> funcs{{
            {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
            {"log", Func::Log}, {"sqrt", Func::Sqrt},
        }};
        for (const auto& [fname, fn] : funcs) {
            if (name == fname) {
                if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
                Expr arg = parse_sum();
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                return Expr::call(fn, arg);
            }
        }
        if (name == "pi") return Expr::number(std::numbers::pi);
        if (name == "e") return Expr::number(std::numbers::e);

        if (name.size() > 1 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            int idx = 0;
            const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (res.ec != std::errc() || idx > n_ + 1)
                throw SymbolError("coordinate " + name + " out of range (max x" +
                                      std::to_string(n_ + 1) + ")",
                                  start);
            return Expr::coord(idx);
        }
        if (auto it = aliases_.find(name); it != aliases_.end()) return Expr::coord(it->second);
        throw SymbolError("unknown symbol '" + name + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int n_;
    const std::unordered_map<std::string, int>& aliases_;
};

}  // namespace

Expr parse_expr(std::string_view text, int n, const std::unordered_map<std::string, int>& aliases)
{
    return Parser(text, n, aliases).parse();
}

}  // namespace wh
