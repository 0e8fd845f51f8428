#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <orbipar/error.hpp>
#include <orbipar/field.hpp>

namespace orbipar
{

// Truncated power series c_0 + c_1 s + ... + c_{N-1} s^{N-1} + O(s^N) over a
// finite field. Binary operations require equal precision; ring operations
// never lose precision.
class series
{
public:
    series() = default;
    series(field_ptr f, std::size_t prec) : f_(std::move(f)), c_(prec, 0)
    {
        if (prec == 0) {
            throw structural_error("series precision must be at least 1");
        }
    }
    series(field_ptr f, std::vector<fe> coeffs) : f_(std::move(f)), c_(std::move(coeffs))
    {
        if (c_.empty()) {
            throw structural_error("series precision must be at least 1");
        }
        for (auto x : c_) {
            if (!f_->contains(x)) {
                throw structural_error("coefficient outside " + f_->name());
            }
        }
    }
    // Coefficients given as integers reduced through the prime field.
    static series from_ints(field_ptr f, std::size_t prec, std::initializer_list<long long> ints)
    {
        series r(f, prec);
        std::size_t i = 0;
        for (auto v : ints) {
            if (i < prec) {
                r.c_[i] = f->from_int(v);
            }
            ++i;
        }
        return r;
    }
    static series constant(field_ptr f, std::size_t prec, fe value)
    {
        series r(std::move(f), prec);
        r.c_[0] = value;
        return r;
    }
    static series one(field_ptr f, std::size_t prec)
    {
        return constant(std::move(f), prec, 1);
    }
    // c * s^deg, zero when deg >= prec.
    static series monomial(field_ptr f, std::size_t prec, std::size_t deg, fe c = 1)
    {
        series r(std::move(f), prec);
        if (deg < prec) {
            r.c_[deg] = c;
        }
        return r;
    }

    const field_ptr &field_ref() const noexcept
    {
        return f_;
    }
    const class field &fld() const noexcept
    {
        return *f_;
    }
    std::size_t prec() const noexcept
    {
        return c_.size();
    }
    fe operator[](std::size_t i) const noexcept
    {
        return c_[i];
    }
    fe &operator[](std::size_t i) noexcept
    {
        return c_[i];
    }
    const std::vector<fe> &coeffs() const noexcept
    {
        return c_;
    }

    // Index of the first nonzero coefficient; prec() when all vanish.
    std::size_t valuation() const noexcept
    {
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] != 0) {
                return i;
            }
        }
        return c_.size();
    }
    bool is_zero() const noexcept
    {
        return valuation() == prec();
    }
    bool is_unit() const noexcept
    {
        return c_[0] != 0;
    }

    series truncate(std::size_t prec) const
    {
        if (prec > this->prec()) {
            throw precision_error("cannot raise series precision", this->prec());
        }
        return series(f_, std::vector<fe>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(prec)));
    }

    // Multiplication by s^k, dropping what falls off the top.
    series shift(std::size_t k) const
    {
        series r(f_, prec());
        for (std::size_t i = 0; i + k < prec(); ++i) {
            r.c_[i + k] = c_[i];
        }
        return r;
    }

    series operator-() const
    {
        series r(*this);
        for (auto &x : r.c_) {
            x = f_->neg(x);
        }
        return r;
    }
    series &operator+=(const series &o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] = f_->add(c_[i], o.c_[i]);
        }
        return *this;
    }
    series &operator-=(const series &o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] = f_->sub(c_[i], o.c_[i]);
        }
        return *this;
    }
    friend series operator+(series a, const series &b)
    {
        return a += b;
    }
    friend series operator-(series a, const series &b)
    {
        return a -= b;
    }
    friend series operator*(const series &a, const series &b)
    {
        a.check_compatible(b);
        const auto n = a.prec();
        const auto &F = *a.f_;
        series r(a.f_, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j < n; ++j) {
                if (b.c_[j] != 0) {
                    r.c_[i + j] = F.add(r.c_[i + j], F.mul(a.c_[i], b.c_[j]));
                }
            }
        }
        return r;
    }
    series &operator*=(const series &o)
    {
        return *this = *this * o;
    }
    series scaled(fe k) const
    {
        series r(*this);
        for (auto &x : r.c_) {
            x = f_->mul(x, k);
        }
        return r;
    }

    friend bool operator==(const series &a, const series &b)
    {
        return same_field(a.f_, b.f_) && a.c_ == b.c_;
    }

    // Formal derivative.
    series derivative() const
    {
        series r(f_, prec());
        for (std::size_t i = 1; i < prec(); ++i) {
            r.c_[i - 1] = f_->mul(c_[i], f_->from_int(static_cast<long long>(i)));
        }
        return r;
    }

    void check_compatible(const series &o) const
    {
        if (!same_field(f_, o.f_)) {
            throw structural_error("series over different fields");
        }
        if (prec() != o.prec()) {
            throw structural_error("series precision mismatch: " + std::to_string(prec()) + " vs "
                                   + std::to_string(o.prec()));
        }
    }

private:
    field_ptr f_;
    std::vector<fe> c_;
};

// Multiplicative inverse of a unit by successive approximation.
inline series inverse(const series &a)
{
    if (!a.is_unit()) {
        throw not_invertible("series is not invertible", a.valuation());
    }
    const auto &F = a.fld();
    const auto n = a.prec();
    const auto a0inv = F.inv(a[0]);
    series b(a.field_ref(), n);
    b[0] = a0inv;
    for (std::size_t m = 1; m < n; ++m) {
        fe acc = 0;
        for (std::size_t i = 1; i <= m; ++i) {
            acc = F.add(acc, F.mul(a[i], b[m - i]));
        }
        b[m] = F.neg(F.mul(a0inv, acc));
    }
    return b;
}

// f(g(s)) for g with zero constant term, where f and g may carry different
// precisions. The result is known modulo s^min(prec(g), prec(f) * val(g)).
inline series substitute(const series &f, const series &g)
{
    if (!same_field(f.field_ref(), g.field_ref())) {
        throw structural_error("series over different fields");
    }
    if (g[0] != 0) {
        throw domain_error("substitution requires zero constant term");
    }
    const auto v = g.valuation();
    std::size_t out = g.prec();
    if (v < g.prec()) {
        out = std::min(out, f.prec() * v);
    }
    const auto gt = g.truncate(out);
    // terms f_i g^i with i * v >= out vanish
    std::size_t top = f.prec();
    if (v >= g.prec()) {
        top = 1;
    }
    else if (v >= 1) {
        top = std::min(top, (out + v - 1) / v);
    }
    series r(f.field_ref(), out);
    for (std::size_t i = top; i-- > 0;) {
        r = r * gt;
        r[0] = f.fld().add(r[0], f[i]);
    }
    return r;
}

// f(g(s)) at the common precision N.
inline series compose(const series &f, const series &g)
{
    f.check_compatible(g);
    if (g[0] != 0) {
        throw domain_error("series_compose requires g(0) = 0");
    }
    return substitute(f, g);
}

// Compositional inverse h with g(h(s)) = h(g(s)) = s.
inline series reversion(const series &g)
{
    if (g[0] != 0) {
        throw domain_error("reversion requires g(0) = 0");
    }
    if (g.prec() < 2 || g[1] == 0) {
        throw domain_error("reversion requires an invertible linear coefficient");
    }
    const auto &F = g.fld();
    const auto n = g.prec();
    const auto lin_inv = F.inv(g[1]);
    series h(g.field_ref(), n);
    h[1] = lin_inv;
    // g(h + d s^m) = g(h) + g_1 d s^m + O(s^{m+1})
    for (std::size_t m = 2; m < n; ++m) {
        const auto gh = compose(g, h);
        const auto err = gh[m];
        if (err != 0) {
            h[m] = F.sub(h[m], F.mul(err, lin_inv));
        }
    }
    return h;
}

// Truncated Laurent series sum_{i<len} c_i s^{floor+i} + O(s^{floor+len}).
// floor is a window bound: the true valuation may be larger. Each value
// carries its own window; arithmetic propagates absolute precision exactly.
class laurent
{
public:
    laurent() = default;
    laurent(field_ptr f, long floor, std::size_t len) : f_(std::move(f)), floor_(floor), c_(len, 0) {}
    laurent(field_ptr f, long floor, std::vector<fe> coeffs)
        : f_(std::move(f)), floor_(floor), c_(std::move(coeffs))
    {
        for (auto x : c_) {
            if (!f_->contains(x)) {
                throw structural_error("coefficient outside " + f_->name());
            }
        }
    }
    explicit laurent(const series &s) : f_(s.field_ref()), floor_(0), c_(s.coeffs()) {}

    static laurent monomial(field_ptr f, long exponent, std::size_t len, fe c = 1)
    {
        laurent r(std::move(f), exponent, len);
        if (len > 0) {
            r.c_[0] = c;
        }
        return r;
    }

    const field_ptr &field_ref() const noexcept
    {
        return f_;
    }
    const class field &fld() const noexcept
    {
        return *f_;
    }
    long floor() const noexcept
    {
        return floor_;
    }
    std::size_t length() const noexcept
    {
        return c_.size();
    }
    // Exponent of the first unknown coefficient.
    long abs_prec() const noexcept
    {
        return floor_ + static_cast<long>(c_.size());
    }
    const std::vector<fe> &coeffs() const noexcept
    {
        return c_;
    }

    fe coeff(long exponent) const
    {
        if (exponent < floor_) {
            return 0;
        }
        if (exponent >= abs_prec()) {
            throw precision_error("coefficient beyond known window", static_cast<std::size_t>(std::max(0L, abs_prec())));
        }
        return c_[static_cast<std::size_t>(exponent - floor_)];
    }

    // Exponent of the first nonzero stored coefficient; abs_prec() if none.
    long valuation() const noexcept
    {
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] != 0) {
                return floor_ + static_cast<long>(i);
            }
        }
        return abs_prec();
    }
    bool is_zero() const noexcept
    {
        return valuation() == abs_prec();
    }

    // Moves the floor up to the valuation (no information lost).
    laurent normalized() const
    {
        const auto v = valuation();
        if (v == floor_) {
            return *this;
        }
        return laurent(f_, v,
                       std::vector<fe>(c_.begin() + static_cast<std::ptrdiff_t>(v - floor_), c_.end()));
    }

    // Same value with the window cut to end at abs_prec.
    laurent truncate_abs(long abs) const
    {
        if (abs > abs_prec()) {
            throw precision_error("cannot extend Laurent window", static_cast<std::size_t>(std::max(0L, abs_prec())));
        }
        if (abs <= floor_) {
            return laurent(f_, abs, std::size_t{0});
        }
        return laurent(f_, floor_,
                       std::vector<fe>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(abs - floor_)));
    }

    // Multiplication by s^k.
    laurent shift(long k) const
    {
        laurent r(*this);
        r.floor_ += k;
        return r;
    }

    // The power series part, which must be all there is. Fails when a
    // negative-exponent coefficient is nonzero or fewer than prec
    // coefficients are known.
    series to_series(std::size_t prec) const
    {
        if (valuation() < 0) {
            throw domain_error("Laurent value has negative valuation " + std::to_string(valuation()));
        }
        if (abs_prec() < static_cast<long>(prec)) {
            throw precision_error("Laurent window too short for requested precision",
                                  static_cast<std::size_t>(std::max(0L, abs_prec())));
        }
        series r(f_, prec);
        for (std::size_t i = 0; i < prec; ++i) {
            r[i] = coeff(static_cast<long>(i));
        }
        return r;
    }

    laurent operator-() const
    {
        laurent r(*this);
        for (auto &x : r.c_) {
            x = f_->neg(x);
        }
        return r;
    }
    friend laurent operator+(const laurent &a, const laurent &b)
    {
        a.check_field(b);
        const auto lo = std::min(a.floor_, b.floor_);
        const auto hi = std::min(a.abs_prec(), b.abs_prec());
        laurent r(a.f_, lo, static_cast<std::size_t>(std::max(0L, hi - lo)));
        for (long e = lo; e < hi; ++e) {
            r.c_[static_cast<std::size_t>(e - lo)] = a.f_->add(a.coeff(e), b.coeff(e));
        }
        return r;
    }
    friend laurent operator-(const laurent &a, const laurent &b)
    {
        return a + (-b);
    }
    friend laurent operator*(const laurent &x, const laurent &y)
    {
        x.check_field(y);
        // leading zeros would only shrink the window
        const auto a = x.normalized();
        const auto b = y.normalized();
        const auto &F = *a.f_;
        const auto lo = a.floor_ + b.floor_;
        const auto hi = std::min(a.abs_prec() + b.floor_, b.abs_prec() + a.floor_);
        const auto len = static_cast<std::size_t>(std::max(0L, hi - lo));
        laurent r(a.f_, lo, len);
        for (std::size_t i = 0; i < a.c_.size() && i < len; ++i) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j < len && j < b.c_.size(); ++j) {
                if (b.c_[j] != 0) {
                    r.c_[i + j] = F.add(r.c_[i + j], F.mul(a.c_[i], b.c_[j]));
                }
            }
        }
        return r;
    }
    laurent scaled(fe k) const
    {
        laurent r(*this);
        for (auto &x : r.c_) {
            x = f_->mul(x, k);
        }
        return r;
    }

    // Equality on the common validity window.
    friend bool operator==(const laurent &a, const laurent &b)
    {
        if (!same_field(a.f_, b.f_)) {
            return false;
        }
        const auto lo = std::min(a.floor_, b.floor_);
        const auto hi = std::min(a.abs_prec(), b.abs_prec());
        for (long e = lo; e < hi; ++e) {
            if (a.coeff(e) != b.coeff(e)) {
                return false;
            }
        }
        return true;
    }

    void check_field(const laurent &o) const
    {
        if (!same_field(f_, o.f_)) {
            throw structural_error("Laurent values over different fields");
        }
    }

private:
    field_ptr f_;
    long floor_ = 0;
    std::vector<fe> c_;
};

// Inverse of a nonzero Laurent value; relative precision is preserved, so the
// window shrinks by however far the valuation sits above the floor.
inline laurent inverse(const laurent &a)
{
    const auto n = a.normalized();
    if (n.length() == 0 || n.is_zero()) {
        throw not_invertible("Laurent value is zero within its window", 0);
    }
    series u(n.field_ref(), n.coeffs());
    auto ui = inverse(u);
    return laurent(n.field_ref(), -n.floor(), ui.coeffs());
}

// f(g(s)) for a substitution g = s^d * unit, d >= 1.
inline laurent substitute(const laurent &f, const series &g)
{
    if (!same_field(f.field_ref(), g.field_ref())) {
        throw structural_error("Laurent value and substitution over different fields");
    }
    if (g[0] != 0 || g.is_zero()) {
        throw domain_error("Laurent substitution requires a series of positive finite valuation");
    }
    if (f.length() == 0) {
        const auto d = static_cast<long>(g.valuation());
        return laurent(f.field_ref(), f.floor() * d, std::size_t{0});
    }
    series body(f.field_ref(), f.coeffs());
    const laurent body_sub(substitute(body, g));
    const auto k = f.floor();
    if (k == 0) {
        return body_sub;
    }
    const auto gl = laurent(g).normalized();
    const auto base = k > 0 ? gl : inverse(gl);
    auto gp = base;
    for (long i = 1; i < (k > 0 ? k : -k); ++i) {
        gp = gp * base;
    }
    return gp * body_sub;
}

} // namespace orbipar
