#pragma once

// Exact rationals on top of GMP, plus the handful of helpers the rest of the
// library needs (floor, fractional part, canonical formatting).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "toricqc/error.hpp"

namespace toricqc {

using Q = mpq_class;
using Z = mpz_class;
using QVector = std::vector<Q>;

inline Q make_q(long num, long den = 1) {
    Q r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Q& x) { return x.get_den() == 1; }

inline Z floor_q(const Q& x) {
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

inline Z ceil_q(const Q& x) {
    Z r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

/// x - floor(x), always in [0, 1).
inline Q frac_part(const Q& x) {
    Q r = x - Q(floor_q(x));
    r.canonicalize();
    return r;
}

inline long to_long(const Z& z) {
    if (!z.fits_slong_p()) throw Error(ErrorCode::Overflow, "integer does not fit in a machine word: " + z.get_str());
    return z.get_si();
}

inline long to_long_exact(const Q& x) {
    if (!is_integer(x)) throw Error(ErrorCode::NotIntegral, "expected an integer, got " + x.get_str());
    return to_long(x.get_num());
}

/// Canonical "a/b" (b > 0, gcd 1) or "a" when integral.
inline std::string format_q(const Q& x) {
    Q c = x;
    c.canonicalize();
    return c.get_str();
}

inline Q parse_q(std::string_view text) {
    std::string s(text);
    // trim
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::ParseError, "empty rational");
    s = s.substr(b, e - b + 1);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Q r;
    if (r.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
    if (r.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline Z lcm_z(const Z& a, const Z& b) {
    Z r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Q dot(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of vectors of different length");
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::string format_qvector(const QVector& v, std::string_view sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += format_q(v[i]);
    }
    return out;
}

inline Q factorial_q(long n) {
    Z f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return Q(f);
}

}  // namespace toricqc
