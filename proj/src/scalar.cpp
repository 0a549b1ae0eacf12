#include "unfold/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace unfold {

QQi& QQi::operator/=(const QQi& o) {
    Rational n = o.norm2();
    if (n == 0) throw std::domain_error("QQi: division by zero");
    Rational r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
}

bool QQi::is_integer() const {
    return im == 0 && boost::multiprecision::denominator(re) == 1;
}

static std::string rat_str(const Rational& r) { return r.str(); }

std::string QQi::str() const {
    if (im == 0) return rat_str(re);
    std::string ims;
    Rational a = abs(im);
    ims = (a == 1) ? "i" : rat_str(a) + " i";
    if (re == 0) return (im < 0 ? "-" : "") + ims;
    return rat_str(re) + (im < 0 ? "-" : "+") + ims;
}

std::ostream& operator<<(std::ostream& os, const QQi& q) { return os << q.str(); }

static Rational parse_rational(const std::string& s) {
    if (s.empty() || s == "+") return Rational(1);
    if (s == "-") return Rational(-1);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal, converted exactly
        std::string t = s;
        bool neg = false;
        if (t[0] == '+' || t[0] == '-') { neg = t[0] == '-'; t = t.substr(1); }
        dot = t.find('.');
        std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
        if ((ip + fp).empty() || !std::all_of(ip.begin(), ip.end(), ::isdigit) ||
            !std::all_of(fp.begin(), fp.end(), ::isdigit))
            throw std::invalid_argument("bad number: " + s);
        boost::multiprecision::mpz_int num((ip + fp).empty() ? "0" : (ip + fp));
        boost::multiprecision::mpz_int den = 1;
        for (size_t i = 0; i < fp.size(); ++i) den *= 10;
        Rational r(num, den);
        return neg ? Rational(-r) : r;
    }
    for (char ch : s)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-' || ch == '+'))
            throw std::invalid_argument("bad number: " + s);
    std::string t = (s[0] == '+') ? s.substr(1) : s;
    try {
        Rational r(t);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number: " + s);
    }
}

QQi QQi::parse(const std::string& in) {
    std::string s;
    for (char ch : in)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty scalar");
    if (s.back() != 'i') return QQi(parse_rational(s));
    s.pop_back();
    size_t p = std::string::npos;
    for (size_t i = s.size(); i-- > 1;)
        if (s[i] == '+' || s[i] == '-') { p = i; break; }
    if (p == std::string::npos) return QQi(Rational(0), parse_rational(s));
    return QQi(parse_rational(s.substr(0, p)), parse_rational(s.substr(p)));
}

}  // namespace unfold
