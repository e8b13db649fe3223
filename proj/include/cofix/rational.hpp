#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "cofix/errors.hpp"

namespace cofix {

/// Exact rational number with arbitrary-precision integer parts.
/// Canonical form (reduced, positive denominator) is maintained by the
/// backing representation; serialization is always "num/den".
class Rational {
public:
    using backend = boost::multiprecision::cpp_rational;

    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}
    Rational(long long num, long long den) {
        if (den == 0) throw ValidationError("rational with zero denominator");
        boost::multiprecision::cpp_int n(num), d(den);
        if (d < 0) {
            n = -n;
            d = -d;
        }
        v_ = backend(std::move(n), std::move(d));
    }
    explicit Rational(backend v) : v_(std::move(v)) {}

    /// Parses "num/den" or a bare integer "num". Rejects anything else.
    static Rational parse(const std::string& s);

    /// Canonical "num/den" rendering, e.g. "0/1", "1/2", "-3/4".
    std::string str() const;

    bool in_unit_range() const { return v_ >= 0 && v_ <= 1; }

    const backend& value() const { return v_; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
    backend v_;
};

} // namespace cofix
