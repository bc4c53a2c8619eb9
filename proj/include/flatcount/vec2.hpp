#pragma once

#include "flatcount/scalar.hpp"

namespace flatcount {

struct Vec2 {
    Scalar x, y;

    Vec2() = default;
    Vec2(Scalar xx, Scalar yy) : x(std::move(xx)), y(std::move(yy)) {}

    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend Vec2 operator*(const Scalar& s, const Vec2& v) { return {s * v.x, s * v.y}; }

    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }

    bool is_zero() const { return x.sign() == 0 && y.sign() == 0; }

    /// Counterclockwise perpendicular (rotation by +90 degrees).
    Vec2 perp() const { return {-y, x}; }
};

inline Scalar dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Scalar cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Scalar norm2(const Vec2& v) { return dot(v, v); }

/// Canonical representative of {v, -v}: x > 0, or x == 0 and y > 0.
inline Vec2 canonical_sign(const Vec2& v) {
    int sx = v.x.sign();
    if (sx < 0 || (sx == 0 && v.y.sign() < 0)) return -v;
    return v;
}

}  // namespace flatcount
