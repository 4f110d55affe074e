#include "qcorr/expr.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace qcorr {

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    // FNV-ish mixing; only needs to be deterministic and well spread.
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::size_t node_hash(const Node& n);

std::shared_ptr<const Node> intern(Node n) {
    n.hash = node_hash(n);
    return std::make_shared<const Node>(std::move(n));
}

Expr wrap(Node n) { return ExprAccess::wrap(intern(std::move(n))); }

int kind_rank(const Node& n) { return static_cast<int>(n.v.index()); }

std::size_t node_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(kind_rank(n)) * 1099511628211ULL;
    if (auto* num = std::get_if<NumberData>(&n.v)) {
        h = hash_mix(h, rational_hash(num->value));
    } else if (auto* sym = std::get_if<SymbolData>(&n.v)) {
        h = hash_mix(h, std::hash<std::string>{}(sym->name));
        h = hash_mix(h, static_cast<std::size_t>(sym->kind));
    } else if (auto* op = std::get_if<OpaqueData>(&n.v)) {
        h = hash_mix(h, std::hash<std::string>{}(op->func));
        h = hash_mix(h, std::hash<std::string>{}(op->arg));
        h = hash_mix(h, static_cast<std::size_t>(op->order));
    } else if (auto* s = std::get_if<SumData>(&n.v)) {
        for (const Expr& t : s->terms) h = hash_mix(h, t.hash());
    } else if (auto* p = std::get_if<ProductData>(&n.v)) {
        for (const Expr& f : p->factors) h = hash_mix(h, f.hash());
    } else if (auto* pw = std::get_if<PowerData>(&n.v)) {
        h = hash_mix(h, pw->base->hash);
        h = hash_mix(h, rational_hash(pw->exponent));
    } else if (auto* c = std::get_if<CallData>(&n.v)) {
        h = hash_mix(h, static_cast<std::size_t>(c->fn));
        h = hash_mix(h, c->arg->hash);
    }
    return h;
}

const Expr& zero_expr() {
    static const Expr z = wrap(Node{NumberData{Rational(0)}});
    return z;
}

const Expr& one_expr() {
    static const Expr o = wrap(Node{NumberData{Rational(1)}});
    return o;
}

int compare_rational(const Rational& a, const Rational& b) {
    return cmp(a, b);
}

}  // namespace

const char* builtin_name(Builtin fn) {
    switch (fn) {
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Tan: return "tan";
        case Builtin::Ln: return "ln";
        case Builtin::Exp: return "exp";
        case Builtin::Abs: return "abs";
        case Builtin::Atan: return "atan";
    }
    return "?";
}

int compare(const Expr& a, const Expr& b) {
    const Node& na = a.node();
    const Node& nb = b.node();
    if (&na == &nb) return 0;
    if (int k = kind_rank(na) - kind_rank(nb); k != 0) return k < 0 ? -1 : 1;
    switch (na.v.index()) {
        case 0: {
            return compare_rational(std::get<NumberData>(na.v).value,
                                    std::get<NumberData>(nb.v).value);
        }
        case 1: {
            const auto& sa = std::get<SymbolData>(na.v);
            const auto& sb = std::get<SymbolData>(nb.v);
            if (int c = sa.name.compare(sb.name); c != 0) return c < 0 ? -1 : 1;
            return static_cast<int>(sa.kind) - static_cast<int>(sb.kind);
        }
        case 2: {
            const auto& oa = std::get<OpaqueData>(na.v);
            const auto& ob = std::get<OpaqueData>(nb.v);
            if (int c = oa.func.compare(ob.func); c != 0) return c < 0 ? -1 : 1;
            if (int c = oa.arg.compare(ob.arg); c != 0) return c < 0 ? -1 : 1;
            return oa.order - ob.order;
        }
        case 3:
        case 4: {
            const auto& ka = na.v.index() == 3 ? std::get<SumData>(na.v).terms
                                               : std::get<ProductData>(na.v).factors;
            const auto& kb = nb.v.index() == 3 ? std::get<SumData>(nb.v).terms
                                               : std::get<ProductData>(nb.v).factors;
            std::size_t m = std::min(ka.size(), kb.size());
            for (std::size_t i = 0; i < m; ++i)
                if (int c = compare(ka[i], kb[i]); c != 0) return c;
            if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
            return 0;
        }
        case 5: {
            const auto& pa = std::get<PowerData>(na.v);
            const auto& pb = std::get<PowerData>(nb.v);
            if (int c = compare(power_base(pa), power_base(pb)); c != 0) return c;
            return compare_rational(pa.exponent, pb.exponent);
        }
        case 6: {
            const auto& ca = std::get<CallData>(na.v);
            const auto& cb = std::get<CallData>(nb.v);
            if (int c = static_cast<int>(ca.fn) - static_cast<int>(cb.fn); c != 0)
                return c;
            return compare(call_arg(ca), call_arg(cb));
        }
    }
    return 0;
}

Expr::Expr() : n_(ExprAccess::ptr(zero_expr())) {}

Expr Expr::number(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c == 0) return zero_expr();
    if (c == 1) return one_expr();
    return wrap(Node{NumberData{c}});
}

Expr Expr::symbol(const std::string& name, SymbolKind kind) {
    return wrap(Node{SymbolData{name, kind}});
}

Expr Expr::coordinate(const std::string& name) {
    return symbol(name, SymbolKind::Coordinate);
}

Expr Expr::parameter(const std::string& name) {
    return symbol(name, SymbolKind::Parameter);
}

Expr Expr::pi() { return symbol("pi", SymbolKind::Pi); }

Expr Expr::opaque(const std::string& func, const std::string& arg, int order) {
    if (order < 0) throw SymbolicError("opaque derivative order must be >= 0");
    return wrap(Node{OpaqueData{func, arg, order}});
}

bool Expr::is_number() const {
    return std::holds_alternative<NumberData>(n_->v);
}

bool Expr::is_zero_constant() const {
    return is_number() && value() == 0;
}

bool Expr::is_one_constant() const {
    return is_number() && value() == 1;
}

const Rational& Expr::value() const {
    return std::get<NumberData>(n_->v).value;
}

const SumData* Expr::as_sum() const { return std::get_if<SumData>(&n_->v); }
const ProductData* Expr::as_product() const {
    return std::get_if<ProductData>(&n_->v);
}
const SymbolData* Expr::as_symbol() const {
    return std::get_if<SymbolData>(&n_->v);
}
const OpaqueData* Expr::as_opaque() const {
    return std::get_if<OpaqueData>(&n_->v);
}
const CallData* Expr::as_call() const { return std::get_if<CallData>(&n_->v); }

std::pair<Expr, Rational> Expr::as_power() const {
    if (auto* p = std::get_if<PowerData>(&n_->v))
        return {power_base(*p), p->exponent};
    return {*this, Rational(1)};
}

namespace {

// Splits a canonical term into (numeric coefficient, symbolic key).
std::pair<Rational, Expr> coeff_and_key(const Expr& t) {
    if (t.is_number()) return {t.value(), one_expr()};
    if (const ProductData* p = t.as_product()) {
        if (p->factors.front().is_number()) {
            Rational c = p->factors.front().value();
            if (p->factors.size() == 2) return {c, p->factors[1]};
            std::vector<Expr> rest(p->factors.begin() + 1, p->factors.end());
            // Factors stay sorted; rebuild without re-canonicalizing.
            return {c, wrap(Node{ProductData{std::move(rest)}})};
        }
    }
    return {Rational(1), t};
}

Expr term_from(const Rational& c, const Expr& key) {
    if (c == 0) return zero_expr();
    if (key.is_one_constant()) return Expr::number(c);
    if (c == 1) return key;
    std::vector<Expr> factors;
    factors.push_back(Expr::number(c));
    if (const ProductData* p = key.as_product())
        factors.insert(factors.end(), p->factors.begin(), p->factors.end());
    else
        factors.push_back(key);
    return wrap(Node{ProductData{std::move(factors)}});
}

}  // namespace

Expr Expr::sum(std::span<const Expr> terms) {
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> collected;
    std::vector<const Expr*> stack;
    std::vector<Expr> flat;
    for (const Expr& t : terms) {
        if (const SumData* s = t.as_sum())
            flat.insert(flat.end(), s->terms.begin(), s->terms.end());
        else
            flat.push_back(t);
    }
    for (const Expr& t : flat) {
        if (t.is_number()) {
            constant += t.value();
            continue;
        }
        auto [c, key] = coeff_and_key(t);
        auto [it, fresh] = collected.emplace(key, c);
        if (!fresh) it->second += c;
    }
    std::vector<Expr> out;
    if (constant != 0) out.push_back(number(constant));
    for (const auto& [key, c] : collected) {
        if (c == 0) continue;
        out.push_back(term_from(c, key));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    return wrap(Node{SumData{std::move(out)}});
}

Expr Expr::sum(std::initializer_list<Expr> terms) {
    return sum(std::span<const Expr>(terms.begin(), terms.size()));
}

Expr Expr::product(std::span<const Expr> factors) {
    Rational coeff(1);
    std::map<Expr, Rational, ExprLess> bases;  // base -> accumulated exponent
    std::vector<Expr> flat;
    for (const Expr& f : factors) {
        if (const ProductData* p = f.as_product())
            flat.insert(flat.end(), p->factors.begin(), p->factors.end());
        else
            flat.push_back(f);
    }
    for (const Expr& f : flat) {
        if (f.is_number()) {
            if (f.value() == 0) return zero_expr();
            coeff *= f.value();
            continue;
        }
        auto [base, e] = f.as_power();
        auto [it, fresh] = bases.emplace(base, e);
        if (!fresh) it->second += e;
    }
    std::vector<Expr> out;
    for (const auto& [base, e] : bases) {
        Expr f = pow(base, e);
        if (f.is_number()) {
            if (f.value() == 0) return zero_expr();
            coeff *= f.value();
        } else {
            out.push_back(f);
        }
    }
    if (out.empty()) return number(coeff);
    if (coeff == 0) return zero_expr();
    if (coeff != 1) out.insert(out.begin(), number(coeff));
    if (out.size() == 1) return out.front();
    // pow() may return a non-sorted interleaving; restore canonical order of
    // the non-numeric tail.
    std::sort(out.begin() + (out.front().is_number() ? 1 : 0), out.end(),
              ExprLess{});
    return wrap(Node{ProductData{std::move(out)}});
}

Expr Expr::product(std::initializer_list<Expr> factors) {
    return product(std::span<const Expr>(factors.begin(), factors.size()));
}

Expr Expr::pow(const Expr& base, const Rational& exponent) {
    Rational e = exponent;
    e.canonicalize();
    if (e == 0) return one_expr();
    if (e == 1) return base;
    if (base.is_number()) {
        const Rational& b = base.value();
        if (b == 0) {
            if (e < 0) throw SymbolicError("0 raised to a negative power");
            return zero_expr();
        }
        if (b == 1) return one_expr();
        if (is_integer(e) && fits_long(e))
            return number(rational_pow(b, e.get_num().get_si()));
        // Rational exponent p/q: exact when b has an exact q-th root.
        if (e.get_den().fits_ulong_p() && e.get_num().fits_slong_p()) {
            if (auto r = rational_root(b, e.get_den().get_ui()))
                return number(rational_pow(*r, e.get_num().get_si()));
        }
        if (b < 0 && !is_integer(e))
            throw SymbolicError("negative rational under fractional power");
    }
    if (auto* p = std::get_if<PowerData>(&base.node().v)) {
        // (x^a)^n -> x^(a n) for integer n; valid wherever x^a is defined.
        if (is_integer(e)) return pow(power_base(*p), p->exponent * e);
    }
    if (const ProductData* p = base.as_product()) {
        if (is_integer(e)) {
            std::vector<Expr> factors;
            factors.reserve(p->factors.size());
            for (const Expr& f : p->factors) factors.push_back(pow(f, e));
            return product(factors);
        }
        // Fractional power: split off factors with exponents that stay exact
        // (numeric coefficient with exact root, even powers), keep the rest.
        if (p->factors.front().is_number()) {
            const Rational& c = p->factors.front().value();
            if (c > 0 && e.get_den().fits_ulong_p() &&
                e.get_num().fits_slong_p()) {
                if (auto r = rational_root(c, e.get_den().get_ui())) {
                    std::vector<Expr> rest(p->factors.begin() + 1,
                                           p->factors.end());
                    return product({number(rational_pow(*r, e.get_num().get_si())),
                                    pow(product(rest), e)});
                }
            }
        }
    }
    Node n{PowerData{ExprAccess::ptr(base), e}};
    return wrap(std::move(n));
}

Expr Expr::call(Builtin fn, const Expr& arg) {
    if (arg.is_number()) {
        const Rational& v = arg.value();
        switch (fn) {
            case Builtin::Sin:
            case Builtin::Tan:
            case Builtin::Atan:
                if (v == 0) return zero_expr();
                break;
            case Builtin::Cos:
                if (v == 0) return one_expr();
                break;
            case Builtin::Exp:
                if (v == 0) return one_expr();
                break;
            case Builtin::Ln:
                if (v == 1) return zero_expr();
                if (v <= 0) throw SymbolicError("ln of nonpositive constant");
                break;
            case Builtin::Abs:
                return number(::abs(v));
        }
    }
    Node n{CallData{fn, ExprAccess::ptr(arg)}};
    return wrap(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
    return Expr::sum({a, Expr::product({Expr::number(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    return Expr::product({a, Expr::pow(b, -1)});
}
Expr operator-(const Expr& a) {
    return Expr::product({Expr::number(-1), a});
}

// ---------------------------------------------------------------------------
// printing

namespace {

enum Prec { PrecSum = 0, PrecProduct = 1, PrecUnary = 2, PrecPower = 3, PrecAtom = 4 };

void print_node(std::ostream& os, const Expr& e, int parent_prec);

void print_number(std::ostream& os, const Rational& q, int parent_prec) {
    bool needs_paren =
        (q < 0 && parent_prec >= PrecProduct) ||
        (!is_integer(q) && parent_prec >= PrecPower);
    if (needs_paren) os << '(';
    os << rational_str(q);
    if (needs_paren) os << ')';
}

// A product prints as num/den with the negative-exponent factors collected
// under a single '/'.
void print_product(std::ostream& os, const ProductData& p, int parent_prec) {
    Rational coeff(1);
    std::vector<Expr> num, den;
    for (const Expr& f : p.factors) {
        if (f.is_number()) {
            coeff = f.value();
            continue;
        }
        auto [base, e] = f.as_power();
        if (e < 0)
            den.push_back(Expr::pow(base, -e));
        else
            num.push_back(f);
    }
    bool neg = coeff < 0;
    Rational acoeff = ::abs(coeff);
    int prec = neg ? PrecSum : PrecProduct;
    bool paren = parent_prec > prec;
    if (paren) os << '(';
    if (neg) os << '-';
    bool printed = false;
    if (acoeff != 1 || num.empty()) {
        print_number(os, acoeff, PrecProduct);
        printed = true;
    }
    for (const Expr& f : num) {
        if (printed) os << '*';
        print_node(os, f, PrecProduct + 1);
        printed = true;
    }
    if (!den.empty()) {
        os << '/';
        if (den.size() > 1) os << '(';
        for (std::size_t i = 0; i < den.size(); ++i) {
            if (i) os << '*';
            print_node(os, den[i], PrecProduct + 1);
        }
        if (den.size() > 1) os << ')';
    }
    if (paren) os << ')';
}

void print_node(std::ostream& os, const Expr& e, int parent_prec) {
    const Node& n = e.node();
    if (auto* num = std::get_if<NumberData>(&n.v)) {
        print_number(os, num->value, parent_prec);
    } else if (auto* sym = std::get_if<SymbolData>(&n.v)) {
        os << sym->name;
    } else if (auto* op = std::get_if<OpaqueData>(&n.v)) {
        if (op->order == 0)
            os << op->func << '(' << op->arg << ')';
        else
            os << "diff(" << op->func << ',' << op->arg << ',' << op->order << ')';
    } else if (auto* s = std::get_if<SumData>(&n.v)) {
        bool paren = parent_prec > PrecSum;
        if (paren) os << '(';
        bool first = true;
        for (const Expr& t : s->terms) {
            auto [c, key] = coeff_and_key(t);
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << '-';
            Expr mag = term_from(::abs(c), key);
            print_node(os, mag, PrecSum + 1);
            first = false;
        }
        if (paren) os << ')';
    } else if (auto* p = std::get_if<ProductData>(&n.v)) {
        print_product(os, *p, parent_prec);
    } else if (auto* pw = std::get_if<PowerData>(&n.v)) {
        if (pw->exponent < 0) {
            // Bare reciprocal power prints as a quotient.
            bool paren = parent_prec > PrecProduct;
            if (paren) os << '(';
            os << "1/";
            print_node(os, Expr::pow(power_base(*pw), -pw->exponent),
                       PrecProduct + 1);
            if (paren) os << ')';
        } else {
            bool paren = parent_prec > PrecPower;
            if (paren) os << '(';
            print_node(os, power_base(*pw), PrecAtom);
            os << '^';
            print_number(os, pw->exponent, PrecPower + 1);
            if (paren) os << ')';
        }
    } else if (auto* c = std::get_if<CallData>(&n.v)) {
        os << builtin_name(c->fn) << '(';
        print_node(os, call_arg(*c), PrecSum);
        os << ')';
    }
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_node(os, *this, PrecSum);
    return os.str();
}

// ---------------------------------------------------------------------------
// structure queries

namespace {

template <typename F>
void visit_subtrees(const Expr& e, F&& f) {
    f(e);
    const Node& n = e.node();
    if (auto* s = std::get_if<SumData>(&n.v)) {
        for (const Expr& t : s->terms) visit_subtrees(t, f);
    } else if (auto* p = std::get_if<ProductData>(&n.v)) {
        for (const Expr& t : p->factors) visit_subtrees(t, f);
    } else if (auto* pw = std::get_if<PowerData>(&n.v)) {
        visit_subtrees(power_base(*pw), f);
    } else if (auto* c = std::get_if<CallData>(&n.v)) {
        visit_subtrees(call_arg(*c), f);
    }
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    visit_subtrees(e, [&](const Expr& x) {
        if (const SymbolData* s = x.as_symbol()) {
            if (s->kind != SymbolKind::Pi) out.insert(s->name);
        } else if (const OpaqueData* o = x.as_opaque()) {
            out.insert(o->arg);
        }
    });
    return out;
}

std::set<std::pair<std::string, int>> opaque_jets(const Expr& e) {
    std::set<std::pair<std::string, int>> out;
    visit_subtrees(e, [&](const Expr& x) {
        if (const OpaqueData* o = x.as_opaque()) out.emplace(o->func, o->order);
    });
    return out;
}

bool depends_on(const Expr& e, const std::string& symbol) {
    bool found = false;
    visit_subtrees(e, [&](const Expr& x) {
        if (found) return;
        if (const SymbolData* s = x.as_symbol()) {
            if (s->name == symbol) found = true;
        } else if (const OpaqueData* o = x.as_opaque()) {
            if (o->arg == symbol) found = true;
        }
    });
    return found;
}

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e, const std::string& coord) {
    const Node& n = e.node();
    if (std::holds_alternative<NumberData>(n.v)) return Expr();
    if (auto* sym = std::get_if<SymbolData>(&n.v)) {
        if (sym->kind == SymbolKind::Coordinate && sym->name == coord)
            return Expr::number(1);
        return Expr();
    }
    if (auto* op = std::get_if<OpaqueData>(&n.v)) {
        if (op->arg == coord) return Expr::opaque(op->func, op->arg, op->order + 1);
        return Expr();
    }
    if (auto* s = std::get_if<SumData>(&n.v)) {
        std::vector<Expr> terms;
        terms.reserve(s->terms.size());
        for (const Expr& t : s->terms) terms.push_back(differentiate(t, coord));
        return Expr::sum(terms);
    }
    if (auto* p = std::get_if<ProductData>(&n.v)) {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < p->factors.size(); ++i) {
            Expr d = differentiate(p->factors[i], coord);
            if (d.is_zero_constant()) continue;
            std::vector<Expr> factors = p->factors;
            factors[i] = d;
            terms.push_back(Expr::product(factors));
        }
        return Expr::sum(terms);
    }
    if (auto* pw = std::get_if<PowerData>(&n.v)) {
        Expr base = power_base(*pw);
        Expr d = differentiate(base, coord);
        if (d.is_zero_constant()) return Expr();
        return Expr::product({Expr::number(pw->exponent),
                              Expr::pow(base, pw->exponent - 1), d});
    }
    const auto& c = std::get<CallData>(n.v);
    Expr a = call_arg(c);
    Expr d = differentiate(a, coord);
    if (d.is_zero_constant()) return Expr();
    switch (c.fn) {
        case Builtin::Sin: return cos(a) * d;
        case Builtin::Cos: return -(sin(a) * d);
        case Builtin::Tan: return (Expr::number(1) + tan(a) * tan(a)) * d;
        case Builtin::Ln: return d / a;
        case Builtin::Exp: return exp(a) * d;
        case Builtin::Abs: return (a / abs(a)) * d;
        case Builtin::Atan: return d / (Expr::number(1) + a * a);
    }
    throw SymbolicError("unreachable builtin in differentiate");
}

// ---------------------------------------------------------------------------
// substitution and expansion

Expr substitute(const Expr& e,
                const std::vector<std::pair<Expr, Expr>>& rules) {
    for (const auto& [from, to] : rules)
        if (same(e, from)) return to;
    const Node& n = e.node();
    if (auto* s = std::get_if<SumData>(&n.v)) {
        std::vector<Expr> terms;
        terms.reserve(s->terms.size());
        for (const Expr& t : s->terms) terms.push_back(substitute(t, rules));
        return Expr::sum(terms);
    }
    if (auto* p = std::get_if<ProductData>(&n.v)) {
        std::vector<Expr> factors;
        factors.reserve(p->factors.size());
        for (const Expr& t : p->factors) factors.push_back(substitute(t, rules));
        return Expr::product(factors);
    }
    if (auto* pw = std::get_if<PowerData>(&n.v))
        return Expr::pow(substitute(power_base(*pw), rules), pw->exponent);
    if (auto* c = std::get_if<CallData>(&n.v))
        return Expr::call(c->fn, substitute(call_arg(*c), rules));
    return e;
}

Expr substitute(const Expr& e, const Expr& from, const Expr& to) {
    return substitute(e, std::vector<std::pair<Expr, Expr>>{{from, to}});
}

namespace {

// Expanded form as a flat list of non-sum terms.
std::vector<Expr> expand_terms(const Expr& e);

std::vector<Expr> multiply_out(const std::vector<Expr>& a,
                               const std::vector<Expr>& b) {
    std::vector<Expr> out;
    out.reserve(a.size() * b.size());
    for (const Expr& x : a)
        for (const Expr& y : b) out.push_back(x * y);
    return out;
}

std::vector<Expr> expand_terms(const Expr& e) {
    const Node& n = e.node();
    if (auto* s = std::get_if<SumData>(&n.v)) {
        std::vector<Expr> out;
        for (const Expr& t : s->terms) {
            auto sub = expand_terms(t);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    if (auto* p = std::get_if<ProductData>(&n.v)) {
        std::vector<Expr> acc{Expr::number(1)};
        for (const Expr& f : p->factors) acc = multiply_out(acc, expand_terms(f));
        return acc;
    }
    if (auto* pw = std::get_if<PowerData>(&n.v)) {
        Expr base = expand(power_base(*pw));
        const Rational& ex = pw->exponent;
        if (base.as_sum() && is_integer(ex) && ex > 1 && fits_long(ex)) {
            long k = ex.get_num().get_si();
            std::vector<Expr> acc{Expr::number(1)};
            std::vector<Expr> b = expand_terms(base);
            for (long i = 0; i < k; ++i) acc = multiply_out(acc, b);
            return acc;
        }
        return {Expr::pow(base, ex)};
    }
    if (auto* c = std::get_if<CallData>(&n.v))
        return {Expr::call(c->fn, expand(call_arg(*c)))};
    return {e};
}

}  // namespace

Expr expand(const Expr& e) {
    return Expr::sum(expand_terms(e));
}

}  // namespace qcorr
