#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsbasis {

/// Exact rational number over 64-bit integers.
///
/// Always kept in lowest terms with a positive denominator. Every operation
/// that would overflow throws std::overflow_error instead of wrapping, so a
/// value that exists is always exact.
class rational {
public:
    constexpr rational() = default;
    constexpr rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by intent
    rational(std::int64_t n, std::int64_t d) : num_(n), den_(d)
    {
        if (d == 0) {
            throw std::domain_error("rational: zero denominator");
        }
        normalize();
    }

    [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return num_ == 0; }
    [[nodiscard]] constexpr bool is_integer() const noexcept { return den_ == 1; }

    friend rational operator+(const rational& a, const rational& b)
    {
        if (a.den_ == 1 && b.den_ == 1) {
            return raw(checked_add(a.num_, b.num_), 1);
        }
        // a/b + c/d with g = gcd(b, d): (a*(d/g) + c*(b/g)) / (b/g*d)
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t lhs = checked_mul(a.num_, b.den_ / g);
        const std::int64_t rhs = checked_mul(b.num_, a.den_ / g);
        return {checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_)};
    }
    friend rational operator-(const rational& a) { return raw(checked_neg(a.num_), a.den_); }
    friend rational operator-(const rational& a, const rational& b) { return a + (-b); }
    friend rational operator*(const rational& a, const rational& b)
    {
        if (a.den_ == 1 && b.den_ == 1) {
            const std::int64_t n = checked_mul(a.num_, b.num_);
            return raw(n, 1);
        }
        const std::int64_t g1 = std::gcd(a.num_, b.den_);
        const std::int64_t g2 = std::gcd(b.num_, a.den_);
        const std::int64_t n1 = g1 == 0 ? 0 : a.num_ / g1;
        const std::int64_t d2 = g1 == 0 ? b.den_ : b.den_ / g1;
        const std::int64_t n2 = g2 == 0 ? 0 : b.num_ / g2;
        const std::int64_t d1 = g2 == 0 ? a.den_ : a.den_ / g2;
        if (n1 == 0 || n2 == 0) {
            return {};
        }
        return raw(checked_mul(n1, n2), checked_mul(d1, d2));
    }
    friend rational operator/(const rational& a, const rational& b)
    {
        if (b.num_ == 0) {
            throw std::domain_error("rational: division by zero");
        }
        rational inv = b.num_ < 0 ? raw(checked_neg(b.den_), checked_neg(b.num_)) : raw(b.den_, b.num_);
        return a * inv;
    }

    rational& operator+=(const rational& o) { return *this = *this + o; }
    rational& operator-=(const rational& o) { return *this = *this - o; }
    rational& operator*=(const rational& o) { return *this = *this * o; }
    rational& operator/=(const rational& o) { return *this = *this / o; }

    friend constexpr bool operator==(const rational&, const rational&) = default;
    friend std::strong_ordering operator<=>(const rational& a, const rational& b)
    {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    /// "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string str() const
    {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p" or "p/q".
    static rational parse(std::string_view text)
    {
        const auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) {
                return {std::stoll(std::string(text))};
            }
            return {std::stoll(std::string(text.substr(0, slash))),
                    std::stoll(std::string(text.substr(slash + 1)))};
        } catch (const std::logic_error&) {
            throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const rational& q) { return os << q.str(); }

private:
    static rational raw(std::int64_t n, std::int64_t d)
    {
        rational q;
        q.num_ = n;
        q.den_ = d;
        return q;
    }

    void normalize()
    {
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) {
            den_ = 1;
        }
    }

    static std::int64_t checked_mul(std::int64_t a, std::int64_t b)
    {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a, b, &r)) {
            throw std::overflow_error("rational: 64-bit overflow");
        }
        return r;
    }
    static std::int64_t checked_add(std::int64_t a, std::int64_t b)
    {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a, b, &r)) {
            throw std::overflow_error("rational: 64-bit overflow");
        }
        return r;
    }
    static std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace fsbasis
