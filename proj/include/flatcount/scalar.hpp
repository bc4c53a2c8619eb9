#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flatcount {

struct FieldMismatch : std::runtime_error {
    explicit FieldMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact number: a rational, or a + b*sqrt(d) in a real quadratic field Q(sqrt(d))
/// with d a positive square-free integer.  A value with b == 0 is stored as a plain
/// rational (field() == 0) and mixes freely with any field; two values from distinct
/// quadratic fields never combine (FieldMismatch).
class Scalar {
public:
    Scalar() : a_(0), b_(0), d_(0) {}
    Scalar(long n) : a_(n), b_(0), d_(0) {}
    Scalar(int n) : a_(n), b_(0), d_(0) {}
    Scalar(const mpq_class& q) : a_(q), b_(0), d_(0) { a_.canonicalize(); }
    Scalar(long num, long den);

    static Scalar quadratic(const mpq_class& a, const mpq_class& b, unsigned long d);
    static Scalar sqrt_integer(unsigned long d);

    const mpq_class& rational_part() const { return a_; }
    const mpq_class& radical_part() const { return b_; }
    unsigned long field() const { return d_; }
    bool is_rational() const { return d_ == 0; }

    /// Exact sign: -1, 0, +1.  Decidable for quadratic irrationals.
    int sign() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
    friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

    friend bool operator==(const Scalar& x, const Scalar& y) { return (x - y).sign() == 0; }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
    friend bool operator<(const Scalar& x, const Scalar& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Scalar& x, const Scalar& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Scalar& x, const Scalar& y) { return (x - y).sign() >= 0; }

    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const;

    /// Exact string, "p/q" or "p/q+r/s√D" (spec surface-file format).
    std::string str() const;
    static Scalar parse(const std::string& text);

    /// Merge field tags; throws FieldMismatch on distinct nonzero tags.
    static unsigned long merge_fields(unsigned long x, unsigned long y);

private:
    mpq_class a_, b_;
    unsigned long d_;

    void normalize();
};

bool is_square_free(unsigned long d);

}  // namespace flatcount
