#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "picm/errors.hpp"

namespace picm {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, canonical form (reduced, positive denominator).
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return numerator(r); }
inline BigInt rat_den(const Rat& r) { return denominator(r); }

/// floor(r) as an exact integer (rounds toward minus infinity).
BigInt floor_rat(const Rat& r);

/// Canonical text form "num/den".
std::string rat_to_string(const Rat& r);

/// Parses "num/den", a bare integer, or a decimal like "0.25".
Rat rat_from_string(std::string_view s);

/// Strict base-10 integer parse (no octal/hex prefixes).
BigInt bigint_from_decimal(std::string_view s);

double rat_to_double(const Rat& r);

/// Shortest decimal that round-trips through double.
std::string double_to_string(double x);

/// Exact rational confined to [0,1]. Every point, mass and CDF value that the
/// library hands around lives here; plain Rat is used for intermediate sums
/// and signed residuals.
class Rat01 {
public:
    Rat01() = default;  // 0/1

    /// num/den in lowest terms; requires den > 0 and 0 <= num/den <= 1.
    static Rat01 reduce(const BigInt& num, const BigInt& den);

    /// Checked conversion from an arbitrary rational.
    static Rat01 from_rat(Rat r);

    static Rat01 from_string(std::string_view s);

    static Rat01 zero() { return Rat01(); }
    static Rat01 one() { return from_rat(Rat(1)); }

    const Rat& value() const noexcept { return v_; }
    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_one() const { return v_ == 1; }

    std::string str() const { return rat_to_string(v_); }
    double to_double() const { return rat_to_double(v_); }

    friend bool operator==(const Rat01& a, const Rat01& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat01& a, const Rat01& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat01& a, const Rat01& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat01& a, const Rat01& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat01& a, const Rat01& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat01& a, const Rat01& b) { return a.v_ >= b.v_; }

private:
    explicit Rat01(Rat v) : v_(std::move(v)) {}
    Rat v_{};
};

std::ostream& operator<<(std::ostream& os, const Rat01& x);

/// r mod 1, mapped into [0,1).
Rat01 mod1(const Rat& r);

/// base^exp mod modulus by square-and-multiply; modulus >= 1, exp >= 0.
BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus);

/// Least m >= 1 with base^m == 1 (mod modulus); modulus 1 gives 1.
/// Requires gcd(base, modulus) == 1. `max_steps` of 0 means unlimited;
/// otherwise a resource_error is raised once the search passes it.
BigInt mul_order(const BigInt& base, const BigInt& modulus, std::uint64_t max_steps = 0);

/// Inverse of a mod n (extended Euclid); requires gcd(a, n) == 1, n >= 1.
BigInt mod_inverse(const BigInt& a, const BigInt& n);

}  // namespace picm
