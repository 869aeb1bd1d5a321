#ifndef FORMCOUNT_ARITH_HPP
#define FORMCOUNT_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace formcount {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when an operation would exceed a configured guard (memory budget,
// term-count limit, integer-width limit). The operation refuses instead of
// approximating silently.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cross-checked identity failed at runtime, e.g. two counting algorithms
// disagree on the same input. Always a bug, never an input error.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int pow_int(std::int64_t base, unsigned long e) {
    return pow_int(Int(static_cast<long>(base)), e);
}

inline Int factorial_int(unsigned long k) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

inline bool fits_i64(const Int& v) {
    return v.fits_slong_p();  // LP64: long == int64_t
}

inline std::int64_t to_i64(const Int& v) {
    if (!fits_i64(v)) throw capacity_error("integer exceeds 64-bit working range: " + v.get_str());
    return static_cast<std::int64_t>(v.get_si());
}

inline double to_double(const Int& v) { return v.get_d(); }
inline double to_double(const Rat& q) { return q.get_d(); }

// Rational from a (num, den) pair, canonicalized.
inline Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// gcd over a vector, 0 for the empty/all-zero vector.
std::int64_t gcd_all(const std::vector<std::int64_t>& v);
Int gcd_all(const std::vector<Int>& v);

}  // namespace formcount

#endif
