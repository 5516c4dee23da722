#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "qdich/rational.hpp"

namespace qdich {

/// Element c0 + c1*w + c2*w^2 + c3*w^3 of Q(w), w = exp(i*pi/4), w^4 = -1.
///
/// The powers 1, w, w^2, w^3 form a basis over Q, so coefficient-wise
/// equality is field equality. Values are immutable in practice; all
/// arithmetic returns new values.
class Cyclotomic {
public:
    Cyclotomic() = default;
    Cyclotomic(Rational c0);  // NOLINT(google-explicit-constructor)
    Cyclotomic(std::int64_t c0) : Cyclotomic(Rational(c0)) {}  // NOLINT
    Cyclotomic(Rational c0, Rational c1, Rational c2, Rational c3);

    /// w^(k mod 8).
    static Cyclotomic root_power(int k);
    /// 1/sqrt(2) = (w - w^3)/2.
    static Cyclotomic inv_sqrt2();
    /// sqrt(2) = w - w^3.
    static Cyclotomic sqrt2();
    /// Parses the to_string() form.
    static Cyclotomic parse(std::string_view text);

    const Rational& coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::array<Rational, 4>& coeffs() const noexcept { return c_; }

    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return a.c_ == b.c_; }

    /// Multiplication by w^k; a signed rotation of the coefficients.
    Cyclotomic times_root(int k) const;
    Cyclotomic scaled(const Rational& r) const;

    Cyclotomic conj() const;
    bool is_zero() const;
    /// True when the imaginary part vanishes (c2 = 0 and c3 = -c1).
    bool is_real() const;

    std::complex<double> to_complex() const;
    std::size_t max_bit_length() const;

    /// "c0 + c1*w + c2*w^2 + c3*w^3" with each coefficient as "p/q".
    std::string to_string() const;

private:
    std::array<Rational, 4> c_;
};

inline Cyclotomic add(const Cyclotomic& x, const Cyclotomic& y) { return x + y; }
inline Cyclotomic mul(const Cyclotomic& x, const Cyclotomic& y) { return x * y; }
inline Cyclotomic conj(const Cyclotomic& x) { return x.conj(); }
inline Cyclotomic root_power(int k) { return Cyclotomic::root_power(k); }
inline std::complex<double> to_complex(const Cyclotomic& x) { return x.to_complex(); }

/// Element a + b*sqrt(2) of the real subfield Q(sqrt 2). Exact probabilities
/// live here; unlike Cyclotomic it supports division.
class QuadraticReal {
public:
    QuadraticReal() = default;
    QuadraticReal(Rational a);  // NOLINT(google-explicit-constructor)
    QuadraticReal(std::int64_t a) : QuadraticReal(Rational(a)) {}  // NOLINT
    QuadraticReal(Rational a, Rational b);

    /// Requires x.is_real().
    static QuadraticReal from_cyclotomic(const Cyclotomic& x);

    const Rational& rational_part() const noexcept { return a_; }
    const Rational& sqrt2_part() const noexcept { return b_; }

    QuadraticReal operator-() const;
    QuadraticReal& operator+=(const QuadraticReal& o);
    QuadraticReal& operator-=(const QuadraticReal& o);
    QuadraticReal& operator*=(const QuadraticReal& o);
    QuadraticReal& operator/=(const QuadraticReal& o);

    friend QuadraticReal operator+(QuadraticReal a, const QuadraticReal& b) { return a += b; }
    friend QuadraticReal operator-(QuadraticReal a, const QuadraticReal& b) { return a -= b; }
    friend QuadraticReal operator*(QuadraticReal a, const QuadraticReal& b) { return a *= b; }
    friend QuadraticReal operator/(QuadraticReal a, const QuadraticReal& b) { return a /= b; }
    friend bool operator==(const QuadraticReal& x, const QuadraticReal& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator<(const QuadraticReal& x, const QuadraticReal& y) {
        return (x - y).sign() < 0;
    }

    /// Exact sign, via a^2 versus 2 b^2 when the parts disagree.
    int sign() const;
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    QuadraticReal inverse() const;
    /// Nonnegative square root when it lies in Q(sqrt 2).
    std::optional<QuadraticReal> sqrt() const;

    Cyclotomic to_cyclotomic() const;
    double to_double() const;
    std::string to_string() const;

private:
    Rational a_;
    Rational b_;
};

/// |x|^2 as an element of Q(sqrt 2).
QuadraticReal norm_squared(const Cyclotomic& x);

}  // namespace qdich
