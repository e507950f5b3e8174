#pragma once

// Exact rational arithmetic used by every enumeration oracle. Backed by GMP.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace opdyn {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125` into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw std::invalid_argument("malformed rational '" + s + "'");
        Integer d(strip_plus(den));
        if (d == 0) throw std::invalid_argument("rational with zero denominator '" + s + "'");
        Rational r(Integer(strip_plus(num)), d);
        r.canonicalize();
        return r;
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!is_int(whole) || (!frac.empty() && !is_int(frac)) || (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
            throw std::invalid_argument("malformed decimal '" + s + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer w(strip_plus(whole));
        Integer f = frac.empty() ? Integer(0) : Integer(frac);
        Integer num = abs(w) * scale + f;
        if (negative) num = -num;
        Rational r(num, scale);
        r.canonicalize();
        return r;
    }
    if (!is_int(s)) throw std::invalid_argument("malformed rational '" + s + "'");
    return Rational(Integer(strip_plus(s)));
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational pow(const Rational& base, unsigned exponent) {
    Rational out(1);
    Rational b = base;
    while (exponent) {
        if (exponent & 1u) out *= b;
        b *= b;
        exponent >>= 1u;
    }
    return out;
}

inline Integer binomial(unsigned n, unsigned k) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

} // namespace opdyn
