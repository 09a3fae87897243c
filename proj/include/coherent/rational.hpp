#pragma once

#include "coherent/errors.hpp"

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace coherent {

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator. Values whose numerator and denominator fit in 64
/// bits are stored inline and combined with 128-bit intermediates; anything
/// larger lives in a GMP rational and is demoted again once it fits.
class Rational {
  public:
    Rational() = default;

    template <std::integral I>
    Rational(I value) { // NOLINT(google-explicit-constructor)
        if constexpr (std::is_signed_v<I>) {
            if (static_cast<long long>(value) == std::numeric_limits<long long>::min())
                big_ = mpq_class(mpz_class(static_cast<long>(value)));
            else
                num_ = static_cast<std::int64_t>(value);
        } else {
            if (static_cast<unsigned long long>(value) > static_cast<unsigned long long>(kMax))
                big_ = mpq_class(mpz_class(static_cast<unsigned long>(value)));
            else
                num_ = static_cast<std::int64_t>(value);
        }
    }

    Rational(long num, long den) {
        if (den == 0) throw InputError("rational with zero denominator");
        if (num == std::numeric_limits<long>::min() || den == std::numeric_limits<long>::min()) {
            mpq_class v{mpz_class(num), mpz_class(den)};
            v.canonicalize();
            assign(std::move(v));
            return;
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    explicit Rational(mpq_class value) {
        value.canonicalize();
        assign(std::move(value));
    }
    explicit Rational(const mpz_class& integer) { assign(mpq_class(integer)); }

    /// Parses "p/q", an integer, or a decimal such as "-0.25" or "1.5e-3".
    /// Decimals are converted exactly.
    static Rational parse(std::string_view text);

    /// Exact value of a finite double.
    static Rational from_double(double v) {
        if (!std::isfinite(v)) throw InputError("non-finite value has no rational form");
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), v);
        Rational r;
        r.assign(std::move(q));
        return r;
    }

    /// Canonical text: "p/q" in lowest terms, or just "p" for integers.
    std::string str() const {
        if (big_) return big_->get_str();
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    /// Truncates toward zero, as GMP does.
    double to_double() const {
        if (!big_ && den_ == 1 && within_double(num_)) return static_cast<double>(num_);
        return to_mpq().get_d();
    }

    mpz_class numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_)); }
    mpz_class denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_)); }
    mpq_class to_mpq() const {
        if (big_) return *big_;
        return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
    }

    int sign() const { return big_ ? sgn(*big_) : (num_ > 0) - (num_ < 0); }
    bool is_zero() const { return !big_ && num_ == 0; }
    bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

    Rational& operator+=(const Rational& o) {
        if (!big_ && !o.big_) add_small(num_, den_, o.num_, o.den_);
        else assign(to_mpq() + o.to_mpq());
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        if (!big_ && !o.big_) add_small(num_, den_, -o.num_, o.den_);
        else assign(to_mpq() - o.to_mpq());
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        if (!big_ && !o.big_) mul_small(num_, den_, o.num_, o.den_);
        else assign(to_mpq() * o.to_mpq());
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("rational division by zero");
        if (!big_ && !o.big_) {
            if (o.num_ < 0) mul_small(num_, den_, -o.den_, -o.num_);
            else mul_small(num_, den_, o.den_, o.num_);
        } else {
            assign(to_mpq() / o.to_mpq());
        }
        return *this;
    }

    /// *this -= a * b.
    void sub_product(const Rational& a, const Rational& b) {
        if (a.is_zero() || b.is_zero()) return;
        Rational p = a;
        p *= b;
        *this -= p;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(Rational a) {
        if (a.big_) mpq_neg(a.big_->get_mpq_t(), a.big_->get_mpq_t());
        else a.num_ = -a.num_;
        return a;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        if (a.big_ && b.big_) return mpq_equal(a.big_->get_mpq_t(), b.big_->get_mpq_t()) != 0;
        return false; // a demoted value never equals a promoted one
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            const i128 l = static_cast<i128>(a.num_) * b.den_, r = static_cast<i128>(b.num_) * a.den_;
            return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
        }
        const int c = cmp(a.to_mpq(), b.to_mpq());
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    using i128 = __int128;
    static constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

    static bool fits(i128 v) { return v >= -static_cast<i128>(kMax) && v <= kMax; }
    static bool within_double(std::int64_t v) { return v >= -(std::int64_t{1} << 53) && v <= (std::int64_t{1} << 53); }

    static mpz_class to_mpz(i128 v) {
        const bool negative = v < 0;
        unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        const std::uint64_t words[2] = {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)};
        mpz_class z;
        mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
        if (negative) z = -z;
        return z;
    }

    // n / d in lowest terms with d > 0.
    void set(i128 n, i128 d) {
        if (fits(n) && fits(d)) {
            big_.reset();
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
        } else {
            big_ = mpq_class(to_mpz(n), to_mpz(d));
        }
    }

    // Canonical value; stored inline when it fits.
    void assign(mpq_class v) {
        if (v.get_num().fits_slong_p() && v.get_den().fits_slong_p() && v.get_num() != std::numeric_limits<long>::min()) {
            num_ = v.get_num().get_si();
            den_ = v.get_den().get_si();
            big_.reset();
        } else {
            big_ = std::move(v);
        }
    }

    void add_small(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        const std::int64_t g = std::gcd(b, d);
        if (g == 1) {
            set(static_cast<i128>(a) * d + static_cast<i128>(c) * b, static_cast<i128>(b) * d);
            return;
        }
        const std::int64_t bg = b / g;
        const i128 t = static_cast<i128>(a) * (d / g) + static_cast<i128>(c) * bg;
        if (t == 0) {
            set(0, 1);
            return;
        }
        const i128 rem = t % g;
        const std::int64_t g2 = std::gcd(g, static_cast<std::int64_t>(rem < 0 ? -rem : rem));
        set(t / g2, static_cast<i128>(bg) * (d / g2));
    }

    void mul_small(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        if (a == 0 || c == 0) {
            set(0, 1);
            return;
        }
        const std::int64_t g1 = std::gcd(a, d), g2 = std::gcd(c, b);
        set(static_cast<i128>(a / g1) * (c / g2), static_cast<i128>(b / g2) * (d / g1));
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::optional<mpq_class> big_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational pow(const Rational& base, unsigned exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
    return Rational(mpq_class(num, den));
}

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&](const char* why) {
        return InputError("malformed rational '" + std::string(text) + "': " + why);
    };
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    auto parse_integer = [&](std::string_view s) {
        s = trim(s);
        bool negative = false;
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty()) throw fail("missing digits");
        for (char c : s)
            if (c < '0' || c > '9') throw fail("unexpected character");
        mpz_class z(std::string(s), 10);
        return negative ? mpz_class(-z) : z;
    };

    const std::string_view s = trim(text);
    if (s.empty()) throw fail("empty");

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(s.substr(0, slash));
        mpz_class den = parse_integer(s.substr(slash + 1));
        if (den == 0) throw fail("zero denominator");
        return Rational(mpq_class(num, den));
    }

    // Decimal with optional fraction and exponent.
    std::string_view mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = s.substr(0, e);
        const mpz_class ez = parse_integer(s.substr(e + 1));
        if (!ez.fits_slong_p() || ez > 4096 || ez < -4096) throw fail("exponent out of range");
        exponent = ez.get_si();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '+' || mantissa.front() == '-')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long fraction_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw fail("two decimal points");
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++fraction_digits;
        } else {
            throw fail("unexpected character");
        }
    }
    if (digits.empty()) throw fail("missing digits");

    mpz_class num(digits, 10);
    if (negative) num = -num;
    const long scale = exponent - fraction_digits;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0) return Rational(mpq_class(num * ten_pow));
    return Rational(mpq_class(num, ten_pow));
}

} // namespace coherent
