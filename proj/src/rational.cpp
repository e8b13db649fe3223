#include "cofix/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace cofix {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

} // namespace

Rational Rational::parse(const std::string& s) {
    const auto slash = s.find('/');
    const std::string num = (slash == std::string::npos) ? s : s.substr(0, slash);
    const std::string den = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-')
        throw ValidationError("malformed rational '" + s + "' (expected \"num/den\")");
    boost::multiprecision::cpp_int d(den);
    if (d == 0) throw ValidationError("rational with zero denominator: '" + s + "'");
    return Rational(backend(boost::multiprecision::cpp_int(num), d));
}

std::string Rational::str() const {
    return numerator(v_).str() + "/" + denominator(v_).str();
}

} // namespace cofix
