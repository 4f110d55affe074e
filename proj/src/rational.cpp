#include "qcorr/rational.hpp"

#include <functional>

namespace qcorr {

Rational rational_pow(const Rational& q, long n) {
    if (n == 0) return Rational(1);
    bool neg = n < 0;
    unsigned long k = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), k);
    Rational r = neg ? Rational(den, num) : Rational(num, den);
    if (r.get_den() == 0) throw std::domain_error("rational_pow: 0^negative");
    r.canonicalize();
    return r;
}

std::optional<Rational> rational_root(const Rational& q, unsigned long p) {
    if (p == 1) return q;
    if (sgn(q) < 0 && p % 2 == 0) return std::nullopt;
    Integer num, den;
    int exact_num = mpz_root(num.get_mpz_t(), q.get_num().get_mpz_t(), p);
    int exact_den = mpz_root(den.get_mpz_t(), q.get_den().get_mpz_t(), p);
    if (!exact_num || !exact_den) return std::nullopt;
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::size_t rational_hash(const Rational& q) {
    // Nodes hash once at construction; string form is cheap enough there.
    return std::hash<std::string>{}(rational_str(q));
}

}  // namespace qcorr
