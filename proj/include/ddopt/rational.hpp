#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "ddopt/errors.hpp"

namespace ddopt {

using int128 = __int128;

namespace detail {

inline int128 abs128(int128 x) { return x < 0 ? -x : x; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw rational_overflow("rational addition overflow");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw rational_overflow("rational multiplication overflow");
    return r;
}

inline std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

}  // namespace detail

// Exact rational number on 128-bit integers. Always stored normalized with a
// positive denominator; every operation checks for overflow and throws
// rational_overflow instead of wrapping.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(int n) : num_(n), den_(1) {}        // NOLINT(google-explicit-constructor)
    Rational(int128 n) : num_(n), den_(1) {}     // NOLINT(google-explicit-constructor)
    Rational(int128 n, int128 d) : num_(n), den_(d) { normalize(); }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using namespace detail;
        int128 g = gcd128(a.den_, b.den_);
        int128 bd = b.den_ / g;
        int128 n = checked_add(checked_mul(a.num_, bd), checked_mul(b.num_, a.den_ / g));
        return Rational(n, checked_mul(a.den_, bd));
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        using namespace detail;
        int128 g1 = gcd128(a.num_, b.den_);
        int128 g2 = gcd128(b.num_, a.den_);
        return Rational(checked_mul(a.num_ / g1, b.num_ / g2),
                        checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw degenerate_input("rational division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        using namespace detail;
        int128 lhs = checked_mul(a.num_, b.den_);
        int128 rhs = checked_mul(b.num_, a.den_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    bool is_integer() const { return den_ == 1; }

    std::string str() const {
        if (den_ == 1) return detail::int128_to_string(num_);
        return detail::int128_to_string(num_) + "/" + detail::int128_to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    void normalize() {
        if (den_ == 0) throw degenerate_input("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int128 g = detail::gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int128 num_;
    int128 den_;
};

}  // namespace ddopt
