#include "picm/rational.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace picm {

BigInt floor_rat(const Rat& r) {
    BigInt q = numerator(r) / denominator(r);  // truncates toward zero
    if (r < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

BigInt bigint_from_decimal(std::string_view s) {
    size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    if (i >= s.size()) throw validation_error("empty integer literal");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw validation_error("bad digit in integer literal '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return negative ? BigInt(-v) : v;
}

Rat rat_from_string(std::string_view s) {
    if (s.empty()) throw validation_error("empty rational literal");
    const auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        const BigInt num = bigint_from_decimal(s.substr(0, slash));
        const BigInt den = bigint_from_decimal(s.substr(slash + 1));
        if (den == 0) throw validation_error("zero denominator in '" + std::string(s) + "'");
        return Rat(num, den);
    }
    // scientific suffix scales by a power of ten, exactly
    Rat scale = 1;
    auto exp_pos = s.find_first_of("eE");
    if (exp_pos != std::string_view::npos) {
        const BigInt e = bigint_from_decimal(s.substr(exp_pos + 1));
        const unsigned mag = abs(e).convert_to<unsigned>();
        BigInt tens = 1;
        for (unsigned i = 0; i < mag; ++i) tens *= 10;
        scale = e < 0 ? Rat(1, tens) : Rat(tens);
        s = s.substr(0, exp_pos);
    }
    const auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        // decimal literal: digits after the dot scale the denominator
        std::string digits(s.substr(0, dot));
        const std::string_view frac = s.substr(dot + 1);
        digits.append(frac);
        BigInt den = 1;
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        return Rat(bigint_from_decimal(digits), den) * scale;
    }
    return Rat(bigint_from_decimal(s)) * scale;
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

std::string double_to_string(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Rat01 Rat01::reduce(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw domain_error("denominator must be positive");
    if (num < 0 || num > den) throw domain_error("value outside [0,1]: " + rat_to_string(Rat(num, den)));
    return Rat01(Rat(num, den));
}

Rat01 Rat01::from_rat(Rat r) {
    if (r < 0 || r > 1) throw domain_error("value outside [0,1]: " + rat_to_string(r));
    return Rat01(std::move(r));
}

Rat01 Rat01::from_string(std::string_view s) { return from_rat(rat_from_string(s)); }

std::ostream& operator<<(std::ostream& os, const Rat01& x) { return os << x.str(); }

Rat01 mod1(const Rat& r) { return Rat01::from_rat(r - floor_rat(r)); }

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
    if (modulus < 1) throw domain_error("modulus must be >= 1");
    if (exp < 0) throw domain_error("exponent must be >= 0");
    if (modulus == 1) return 0;
    BigInt result = 1;
    BigInt b = base % modulus;
    if (b < 0) b += modulus;
    BigInt e = exp;
    while (e > 0) {
        if (bit_test(e, 0)) result = result * b % modulus;
        b = b * b % modulus;
        e >>= 1;
    }
    return result;
}

BigInt mod_inverse(const BigInt& a, const BigInt& n) {
    if (n < 1) throw domain_error("modulus must be >= 1");
    if (n == 1) return 0;
    BigInt r0 = n, r1 = a % n;
    if (r1 < 0) r1 += n;
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        const BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw domain_error("no modular inverse: arguments not coprime");
    if (t0 < 0) t0 += n;
    return t0;
}

BigInt mul_order(const BigInt& base, const BigInt& modulus, std::uint64_t max_steps) {
    if (modulus < 1) throw domain_error("modulus must be >= 1");
    if (modulus == 1) return 1;
    if (gcd(base, modulus) != 1) throw domain_error("base and modulus must be coprime");
    BigInt acc = base % modulus;
    if (acc < 0) acc += modulus;
    BigInt m = 1;
    while (acc != 1) {
        acc = acc * base % modulus;
        ++m;
        if (max_steps != 0 && m > max_steps)
            throw resource_error("multiplicative order exceeds step budget", max_steps);
    }
    return m;
}

}  // namespace picm
