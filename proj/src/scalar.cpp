#include "flatcount/scalar.hpp"

namespace flatcount {

bool is_square_free(unsigned long d) {
    if (d == 0) return false;
    for (unsigned long p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

Scalar::Scalar(long num, long den) : a_(num, den), b_(0), d_(0) {
    if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
    a_.canonicalize();
}

Scalar Scalar::quadratic(const mpq_class& a, const mpq_class& b, unsigned long d) {
    if (!is_square_free(d)) throw std::invalid_argument("Scalar: d must be a positive square-free integer");
    if (d == 1) return Scalar(mpq_class(a + b));
    Scalar s;
    s.a_ = a;
    s.b_ = b;
    s.d_ = d;
    s.a_.canonicalize();
    s.b_.canonicalize();
    s.normalize();
    return s;
}

Scalar Scalar::sqrt_integer(unsigned long d) { return quadratic(0, 1, d); }

void Scalar::normalize() {
    if (b_ == 0) d_ = 0;
}

unsigned long Scalar::merge_fields(unsigned long x, unsigned long y) {
    if (x == 0) return y;
    if (y == 0 || x == y) return x;
    throw FieldMismatch("mixed quadratic fields: sqrt(" + std::to_string(x) + ") vs sqrt(" + std::to_string(y) + ")");
}

int Scalar::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Mixed signs: sign(a + b√d) = sign(a) * sign(a² − b²d).
    mpq_class n = a_ * a_ - b_ * b_ * static_cast<long>(d_);
    return sa * sgn(n);
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    d_ = merge_fields(d_, o.d_);
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    d_ = merge_fields(d_, o.d_);
    a_ -= o.a_;
    b_ -= o.b_;
    normalize();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    unsigned long d = merge_fields(d_, o.d_);
    mpq_class a = a_ * o.a_;
    if (d != 0 && b_ != 0 && o.b_ != 0) a += b_ * o.b_ * static_cast<long>(d);
    mpq_class b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = d;
    normalize();
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.sign() == 0) throw std::domain_error("Scalar: division by zero");
    if (o.b_ == 0) {
        a_ /= o.a_;
        if (b_ != 0) b_ /= o.a_;
        normalize();
        return *this;
    }
    // 1/(a + b√d) = (a − b√d)/(a² − b²d)
    unsigned long d = merge_fields(d_, o.d_);
    mpq_class norm = o.a_ * o.a_ - o.b_ * o.b_ * static_cast<long>(d);
    Scalar conj;
    conj.a_ = o.a_ / norm;
    conj.b_ = -o.b_ / norm;
    conj.d_ = d;
    conj.normalize();
    return *this *= conj;
}

double Scalar::to_double() const {
    if (d_ == 0) return a_.get_d();
    mpf_class acc(a_, 128);
    mpf_class rad(static_cast<long>(d_), 128);
    rad = sqrt(rad);
    acc += mpf_class(b_, 128) * rad;
    return acc.get_d();
}

std::string Scalar::str() const {
    if (d_ == 0) return a_.get_str();
    std::string s = a_.get_str();
    s += (sgn(b_) < 0) ? "-" : "+";
    mpq_class babs = ::abs(b_);
    s += babs.get_str();
    s += "√";
    s += std::to_string(d_);
    return s;
}

namespace {

mpq_class parse_rat(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational");
    try {
        mpq_class q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational: '" + text + "'");
    }
}

}  // namespace

Scalar Scalar::parse(const std::string& text) {
    const std::string radical = "√";
    auto rpos = text.find(radical);
    if (rpos == std::string::npos) return Scalar(parse_rat(text));
    unsigned long d = 0;
    try {
        d = std::stoul(text.substr(rpos + radical.size()));
    } catch (...) {
        throw ParseError("bad field tag in '" + text + "'");
    }
    // Split "a+b" / "a-b" at the last sign that is not a leading sign or part of "/-".
    std::string head = text.substr(0, rpos);
    std::size_t split = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
        if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' && head[i - 1] != '+' && head[i - 1] != '-') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) throw ParseError("bad quadratic scalar: '" + text + "'");
    mpq_class a = parse_rat(head.substr(0, split));
    mpq_class b = parse_rat(head.substr(split + 1));
    if (head[split] == '-') b = -b;
    return Scalar::quadratic(a, b, d);
}

}  // namespace flatcount
