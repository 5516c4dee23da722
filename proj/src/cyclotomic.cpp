#include "qdich/cyclotomic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qdich/error.hpp"

namespace qdich {

namespace {

std::optional<Rational> rational_sqrt(const Rational& x) {
    if (x.sign() < 0) {
        return std::nullopt;
    }
    const mpq_class& v = x.value();
    if (mpz_perfect_square_p(v.get_num_mpz_t()) == 0 ||
        mpz_perfect_square_p(v.get_den_mpz_t()) == 0) {
        return std::nullopt;
    }
    mpz_class num;
    mpz_class den;
    mpz_sqrt(num.get_mpz_t(), v.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), v.get_den_mpz_t());
    return Rational(mpq_class(num, den));
}

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Cyclotomic::Cyclotomic(Rational c0) : c_{std::move(c0), Rational(), Rational(), Rational()} {}

Cyclotomic::Cyclotomic(Rational c0, Rational c1, Rational c2, Rational c3)
    : c_{std::move(c0), std::move(c1), std::move(c2), std::move(c3)} {}

Cyclotomic Cyclotomic::root_power(int k) {
    return Cyclotomic(1).times_root(k);
}

Cyclotomic Cyclotomic::inv_sqrt2() {
    return Cyclotomic(0, Rational(1, 2), 0, Rational(-1, 2));
}

Cyclotomic Cyclotomic::sqrt2() { return Cyclotomic(0, 1, 0, -1); }

Cyclotomic Cyclotomic::parse(std::string_view text) {
    static constexpr std::string_view kSuffix[4] = {"", "*w", "*w^2", "*w^3"};
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(" + ", pos);
        parts.push_back(trim(text.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 3;
    }
    if (parts.size() != 4) {
        throw Error(ErrorCode::InvalidInput, "cyclotomic needs four terms: '" + std::string(text) + "'");
    }
    Cyclotomic out;
    for (std::size_t i = 0; i < 4; ++i) {
        std::string_view part = parts[i];
        std::string_view suffix = kSuffix[i];
        if (part.size() < suffix.size() || part.substr(part.size() - suffix.size()) != suffix) {
            throw Error(ErrorCode::InvalidInput, "bad cyclotomic term '" + parts[i] + "'");
        }
        out.c_[i] = Rational::parse(part.substr(0, part.size() - suffix.size()));
    }
    return out;
}

Cyclotomic Cyclotomic::operator-() const {
    return Cyclotomic(-c_[0], -c_[1], -c_[2], -c_[3]);
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
    for (std::size_t i = 0; i < 4; ++i) {
        c_[i] += o.c_[i];
    }
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
    for (std::size_t i = 0; i < 4; ++i) {
        c_[i] -= o.c_[i];
    }
    return *this;
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    std::array<mpq_class, 4> acc;
    for (std::size_t i = 0; i < 4; ++i) {
        if (a.c_[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < 4; ++j) {
            if (b.c_[j].is_zero()) {
                continue;
            }
            mpq_class t = a.c_[i].value() * b.c_[j].value();
            if (i + j < 4) {
                acc[i + j] += t;
            } else {
                acc[i + j - 4] -= t;  // w^4 = -1
            }
        }
    }
    return Cyclotomic(Rational(std::move(acc[0])), Rational(std::move(acc[1])),
                      Rational(std::move(acc[2])), Rational(std::move(acc[3])));
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
    *this = *this * o;
    return *this;
}

Cyclotomic Cyclotomic::times_root(int k) const {
    int r = ((k % 8) + 8) % 8;
    Cyclotomic out;
    for (int i = 0; i < 4; ++i) {
        int e = i + r;
        bool negate = false;
        while (e >= 4) {
            e -= 4;
            negate = !negate;
        }
        out.c_[static_cast<std::size_t>(e)] =
            negate ? -c_[static_cast<std::size_t>(i)] : c_[static_cast<std::size_t>(i)];
    }
    return out;
}

Cyclotomic Cyclotomic::scaled(const Rational& r) const {
    return Cyclotomic(c_[0] * r, c_[1] * r, c_[2] * r, c_[3] * r);
}

Cyclotomic Cyclotomic::conj() const {
    // w -> w^7 = -w^3, w^2 -> -w^2, w^3 -> -w
    return Cyclotomic(c_[0], -c_[3], -c_[2], -c_[1]);
}

bool Cyclotomic::is_zero() const {
    return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero();
}

bool Cyclotomic::is_real() const {
    return c_[2].is_zero() && c_[3] == -c_[1];
}

std::complex<double> Cyclotomic::to_complex() const {
    const double h = std::sqrt(0.5);
    double c0 = c_[0].to_double();
    double c1 = c_[1].to_double();
    double c2 = c_[2].to_double();
    double c3 = c_[3].to_double();
    return {c0 + h * (c1 - c3), c2 + h * (c1 + c3)};
}

std::size_t Cyclotomic::max_bit_length() const {
    std::size_t m = 0;
    for (const auto& c : c_) {
        m = std::max(m, c.bit_length());
    }
    return m;
}

std::string Cyclotomic::to_string() const {
    return c_[0].to_string() + " + " + c_[1].to_string() + "*w + " + c_[2].to_string() +
           "*w^2 + " + c_[3].to_string() + "*w^3";
}

QuadraticReal::QuadraticReal(Rational a) : a_(std::move(a)) {}

QuadraticReal::QuadraticReal(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

QuadraticReal QuadraticReal::from_cyclotomic(const Cyclotomic& x) {
    if (!x.is_real()) {
        throw Error(ErrorCode::InvariantViolated, "cyclotomic value is not real: " + x.to_string());
    }
    // c1*w - c1*w^3 = c1*sqrt(2)
    return QuadraticReal(x.coeff(0), x.coeff(1));
}

QuadraticReal QuadraticReal::operator-() const { return QuadraticReal(-a_, -b_); }

QuadraticReal& QuadraticReal::operator+=(const QuadraticReal& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QuadraticReal& QuadraticReal::operator-=(const QuadraticReal& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QuadraticReal& QuadraticReal::operator*=(const QuadraticReal& o) {
    Rational a = a_ * o.a_ + Rational(2) * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

QuadraticReal& QuadraticReal::operator/=(const QuadraticReal& o) {
    *this *= o.inverse();
    return *this;
}

int QuadraticReal::sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    // opposite signs: compare a^2 with 2 b^2
    Rational a2 = a_ * a_;
    Rational b2 = Rational(2) * b_ * b_;
    if (a2 == b2) return 0;  // unreachable for rationals, sqrt(2) is irrational
    return (b2 < a2) ? sa : sb;
}

QuadraticReal QuadraticReal::inverse() const {
    Rational norm = a_ * a_ - Rational(2) * b_ * b_;
    if (norm.is_zero()) {
        throw std::domain_error("inverse of zero in Q(sqrt 2)");
    }
    return QuadraticReal(a_ / norm, -b_ / norm);
}

std::optional<QuadraticReal> QuadraticReal::sqrt() const {
    if (sign() < 0) {
        return std::nullopt;
    }
    if (is_zero()) {
        return QuadraticReal();
    }
    if (b_.is_zero()) {
        if (auto u = rational_sqrt(a_)) {
            return QuadraticReal(*u);
        }
        if (auto v = rational_sqrt(a_ / Rational(2))) {
            return QuadraticReal(Rational(), *v);
        }
        return std::nullopt;
    }
    // (u + v sqrt2)^2 = a + b sqrt2  =>  u^2 = (a +- sqrt(a^2 - 2 b^2)) / 2, v = b / (2u)
    auto d = rational_sqrt(a_ * a_ - Rational(2) * b_ * b_);
    if (!d) {
        return std::nullopt;
    }
    for (const Rational& u2 : {(a_ + *d) / Rational(2), (a_ - *d) / Rational(2)}) {
        auto u = rational_sqrt(u2);
        if (!u || u->is_zero()) {
            continue;
        }
        QuadraticReal s(*u, b_ / (Rational(2) * *u));
        if (s.sign() < 0) {
            s = -s;
        }
        if (s * s == *this) {
            return s;
        }
    }
    return std::nullopt;
}

Cyclotomic QuadraticReal::to_cyclotomic() const {
    return Cyclotomic(a_, b_, Rational(), -b_);
}

double QuadraticReal::to_double() const {
    return a_.to_double() + std::sqrt(2.0) * b_.to_double();
}

// "a", "b*sqrt2" or "a + b*sqrt2" / "a - b*sqrt2", rationals in lowest terms.
std::string QuadraticReal::to_string() const {
    const std::string a = a_.value().get_str();
    if (b_.is_zero()) return a;
    const std::string b = mpq_class(abs(b_.value())).get_str() + "*sqrt2";
    if (a_.is_zero()) return (b_.sign() < 0 ? "-" : "") + b;
    return a + (b_.sign() < 0 ? " - " : " + ") + b;
}

QuadraticReal norm_squared(const Cyclotomic& x) {
    const mpq_class& c0 = x.coeff(0).value();
    const mpq_class& c1 = x.coeff(1).value();
    const mpq_class& c2 = x.coeff(2).value();
    const mpq_class& c3 = x.coeff(3).value();
    // Re = c0 + (c1 - c3)/sqrt2, Im = c2 + (c1 + c3)/sqrt2
    mpq_class a = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3;
    mpq_class b = c0 * c1 - c0 * c3 + c2 * c1 + c2 * c3;
    return QuadraticReal(Rational(std::move(a)), Rational(std::move(b)));
}

}  // namespace qdich
