#include "pirtrade/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace pirtrade {

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational Rational::reciprocal() const { return Rational(1) / *this; }

Rational Rational::pow(const Rational& base, long exponent) {
    mpz_class num, den;
    const unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                         : static_cast<unsigned long>(exponent);
    mpz_pow_ui(num.get_mpz_t(), base.q_.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.q_.get_den_mpz_t(), e);
    if (exponent < 0) {
        if (num == 0) throw std::domain_error("Rational::pow: zero to negative power");
        return Rational(den, num);
    }
    return Rational(num, den);
}

Rational Rational::parse(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    std::string s(text);
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            throw bad();
        return Rational(num, den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpz_class num;
        if (num.set_str(s, 10) != 0) throw bad();
        return Rational(num, mpz_class(1));
    }
    const std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    for (char ch : frac)
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad();
    bool negative = !whole.empty() && whole[0] == '-';
    if (negative || (!whole.empty() && whole[0] == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    mpz_class num;
    if (num.set_str(whole + frac, 10) != 0) throw bad();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    if (negative) num = -num;
    return Rational(num, den);
}

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
    if (digits < 0) throw std::invalid_argument("decimal: negative precision");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const mpz_class num = ::abs(q_.get_num()) * scale;
    const mpz_class& den = q_.get_den();
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const int half = cmp(2 * rem, den);
    if (half > 0 || (half == 0 && mpz_odd_p(quot.get_mpz_t()))) ++quot;

    std::string body = quot.get_str();
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits))
            body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    }
    if (sign() < 0 && quot != 0) body.insert(0, "-");
    return body;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace pirtrade
