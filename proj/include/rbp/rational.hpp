#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rbp {

// Exact arbitrary-precision rational. Every verdict in this library is
// computed in this type; no floating point appears on any decision path.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

using Vec = std::vector<Rat>;

class input_error : public std::runtime_error {
  public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a certificate or cross-check fails re-verification; this is a
// defect in the library itself, never a property of the input.
class internal_error : public std::runtime_error {
  public:
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

// Canonical rational from an integer pair. The mpz two-argument constructor
// canonicalizes (gcd reduction, positive denominator); the int/string
// constructors of mpq_rational do not, so all construction funnels through
// here and rat_parse.
inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw input_error("rational with zero denominator");
    return Rat(Int(num), Int(den));
}

// Parses "p", "-p", or "p/q" with arbitrary-precision parts.
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(Int(s), Int(1));
        }
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw input_error("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw input_error("cannot parse rational: '" + s + "'");
    }
}

// Serializes canonically: "p" for integers, "p/q" with q > 1 otherwise.
inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Vec vec_parse(const std::vector<std::string>& parts) {
    Vec v;
    v.reserve(parts.size());
    for (const auto& p : parts) v.push_back(rat_parse(p));
    return v;
}

inline std::string vec_str(const Vec& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += rat_str(v[i]);
    }
    return out + ")";
}

inline Rat dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec zeros(size_t n) { return Vec(n, Rat(0)); }

inline bool is_zero_vec(const Vec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// Lexicographic comparison by coordinate order; ties broken nowhere else.
inline bool lex_less(const Vec& a, const Vec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

}  // namespace rbp
