#pragma once

#include "qcorr/rational.hpp"

#include <initializer_list>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qcorr {

// Immutable symbolic scalar expression over coordinates, parameters and
// opaque function symbols. Construction always canonicalizes:
//   - sums and products are flattened and sorted, rational constants folded,
//     like terms collected, powers of equal bases merged;
//   - there is no division node: quotients are stored as power -1;
//   - power exponents are rational constants.
// The canonical form is unique for a fixed node ordering, so structural
// equality of canonical trees is a (partial) equality test; full zero
// testing lives in zero.hpp.

class Expr;

enum class SymbolKind : std::uint8_t { Coordinate, Parameter, Pi };

enum class Builtin : std::uint8_t { Sin, Cos, Tan, Ln, Exp, Abs, Atan };

const char* builtin_name(Builtin fn);

struct NumberData {
    Rational value;
};

struct SymbolData {
    std::string name;
    SymbolKind kind;
};

// Opaque function application u^(order)(arg), arg a coordinate name.
struct OpaqueData {
    std::string func;
    std::string arg;
    int order;  // derivative order, >= 0
};

struct SumData {
    std::vector<Expr> terms;
};

struct ProductData {
    std::vector<Expr> factors;
};

struct PowerData {
    // base stored as pointer to break the inclusion cycle Expr -> Node.
    std::shared_ptr<const struct Node> base;
    Rational exponent;  // never 0 or 1 in canonical form
};

struct CallData {
    Builtin fn;
    std::shared_ptr<const struct Node> arg;
};

struct Node {
    std::variant<NumberData, SymbolData, OpaqueData, SumData, ProductData,
                 PowerData, CallData>
        v;
    std::size_t hash = 0;
};

class SymbolicError : public std::runtime_error {
public:
    explicit SymbolicError(const std::string& what) : std::runtime_error(what) {}
};

class Expr {
public:
    // Default-constructed expression is the constant 0.
    Expr();

    static Expr number(long n) { return number(make_rational(n)); }
    static Expr number(const Rational& q);
    static Expr coordinate(const std::string& name);
    static Expr parameter(const std::string& name);
    static Expr symbol(const std::string& name, SymbolKind kind);
    static Expr pi();
    static Expr opaque(const std::string& func, const std::string& arg,
                       int order = 0);
    static Expr sum(std::span<const Expr> terms);
    static Expr sum(std::initializer_list<Expr> terms);
    static Expr product(std::span<const Expr> factors);
    static Expr product(std::initializer_list<Expr> factors);
    static Expr pow(const Expr& base, const Rational& exponent);
    static Expr pow(const Expr& base, long exponent) {
        return pow(base, make_rational(exponent));
    }
    static Expr call(Builtin fn, const Expr& arg);
    static Expr sqrt(const Expr& arg) { return pow(arg, Rational(1, 2)); }

    const Node& node() const { return *n_; }
    std::size_t hash() const { return n_->hash; }

    bool is_number() const;
    bool is_zero_constant() const;
    bool is_one_constant() const;
    // Rational value; only valid when is_number().
    const Rational& value() const;

    const SumData* as_sum() const;
    const ProductData* as_product() const;
    const SymbolData* as_symbol() const;
    const OpaqueData* as_opaque() const;
    const CallData* as_call() const;
    // Any expression viewed as base^exponent (exponent 1 when not a power).
    std::pair<Expr, Rational> as_power() const;

    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

    Expr& operator+=(const Expr& b) { return *this = *this + b; }
    Expr& operator-=(const Expr& b) { return *this = *this - b; }
    Expr& operator*=(const Expr& b) { return *this = *this * b; }
    Expr& operator/=(const Expr& b) { return *this = *this / b; }

private:
    friend struct ExprAccess;
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

struct ExprAccess {
    static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
    static const std::shared_ptr<const Node>& ptr(const Expr& e) { return e.n_; }
};

inline Expr power_base(const PowerData& p) { return ExprAccess::wrap(p.base); }
inline Expr call_arg(const CallData& c) { return ExprAccess::wrap(c.arg); }

// Total order on canonical nodes; content-based, stable across runs.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const {
        return compare(a, b) < 0;
    }
};

inline bool same(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

inline Expr operator+(const Expr& a, long b) { return a + Expr::number(b); }
inline Expr operator+(long a, const Expr& b) { return Expr::number(a) + b; }
inline Expr operator-(const Expr& a, long b) { return a - Expr::number(b); }
inline Expr operator-(long a, const Expr& b) { return Expr::number(a) - b; }
inline Expr operator*(const Expr& a, long b) { return a * Expr::number(b); }
inline Expr operator*(long a, const Expr& b) { return Expr::number(a) * b; }
inline Expr operator/(const Expr& a, long b) { return a / Expr::number(b); }
inline Expr operator/(long a, const Expr& b) { return Expr::number(a) / b; }

inline Expr sin(const Expr& a) { return Expr::call(Builtin::Sin, a); }
inline Expr cos(const Expr& a) { return Expr::call(Builtin::Cos, a); }
inline Expr tan(const Expr& a) { return Expr::call(Builtin::Tan, a); }
inline Expr ln(const Expr& a) { return Expr::call(Builtin::Ln, a); }
inline Expr exp(const Expr& a) { return Expr::call(Builtin::Exp, a); }
inline Expr abs(const Expr& a) { return Expr::call(Builtin::Abs, a); }
inline Expr atan(const Expr& a) { return Expr::call(Builtin::Atan, a); }
inline Expr sqrt(const Expr& a) { return Expr::sqrt(a); }

// Free symbols (coordinates and parameters) of e, by name.
std::set<std::string> free_symbols(const Expr& e);
// Opaque jets (func, max derivative order per func) appearing in e.
std::set<std::pair<std::string, int>> opaque_jets(const Expr& e);

bool depends_on(const Expr& e, const std::string& symbol);

// Exact partial derivative w.r.t. a coordinate name. Opaque applications
// whose argument matches increment their derivative tag, all other symbols
// are treated as constants.
Expr differentiate(const Expr& e, const std::string& coord);

// Replace every subtree structurally equal to a key by its image.
Expr substitute(const Expr& e,
                const std::vector<std::pair<Expr, Expr>>& rules);
Expr substitute(const Expr& e, const Expr& from, const Expr& to);

// Distribute products over sums and expand positive integer powers of sums.
Expr expand(const Expr& e);

}  // namespace qcorr
