#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace qcorr {

// Exact arbitrary-precision rational. All numeric coefficients in the
// symbolic kernel are of this type; doubles appear only at evaluation time.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool fits_long(const Rational& q) {
    return is_integer(q) && q.get_num().fits_slong_p();
}

// q^n for integer n (n may be negative; q must be nonzero then).
Rational rational_pow(const Rational& q, long n);

// Exact rational p-th root if it exists (p >= 1).
std::optional<Rational> rational_root(const Rational& q, unsigned long p);

std::string rational_str(const Rational& q);

std::size_t rational_hash(const Rational& q);

}  // namespace qcorr
