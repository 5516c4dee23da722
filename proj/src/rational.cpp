#include "qdich/rational.hpp"

#include <stdexcept>
#include <utility>

#include "qdich/error.hpp"

namespace qdich {

namespace {

mpz_class to_mpz(std::int64_t v) {
    // long is 64-bit on the LP64 targets we build for.
    return mpz_class(static_cast<long>(v));
}

mpz_class parse_mpz(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty integer");
    }
    if (s.front() == '+') {
        s.erase(s.begin());
    }
    mpz_class z;
    if (z.set_str(s, 10) != 0) {
        throw Error(ErrorCode::InvalidInput, "malformed integer '" + std::string(text) + "'");
    }
    return z;
}

}  // namespace

Rational::Rational(std::int64_t n) : v_(to_mpz(n)) {}

Rational::Rational(std::int64_t n, std::int64_t d) : v_(to_mpz(n), to_mpz(d)) {
    if (d == 0) {
        throw Error(ErrorCode::InvalidInput, "zero denominator");
    }
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(mpq_class(parse_mpz(text)));
    }
    mpz_class den = parse_mpz(text.substr(slash + 1));
    if (den == 0) {
        throw Error(ErrorCode::InvalidInput, "zero denominator");
    }
    return Rational(mpq_class(parse_mpz(text.substr(0, slash)), den));
}

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw std::domain_error("rational division by zero");
    }
    v_ /= o.v_;
    return *this;
}

std::size_t Rational::bit_length() const {
    return mpz_sizeinbase(v_.get_num_mpz_t(), 2) + mpz_sizeinbase(v_.get_den_mpz_t(), 2);
}

std::string Rational::to_string() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

}  // namespace qdich
