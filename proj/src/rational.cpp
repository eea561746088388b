#include "nlslab/rational.hpp"

#include <cctype>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) {
        throw InvalidInput("malformed rational '" + std::string(whole) + "'");
    }
    std::size_t start = (digits.front() == '-' || digits.front() == '+') ? 1 : 0;
    if (start == digits.size()) {
        throw InvalidInput("malformed rational '" + std::string(whole) + "'");
    }
    for (std::size_t i = start; i < digits.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i]))) {
            throw InvalidInput("malformed rational '" + std::string(whole) + "'");
        }
    }
    std::string text(digits.substr(digits.front() == '+' ? 1 : 0));
    return boost::multiprecision::cpp_int(text);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(s, text));
    }
    auto num = parse_integer(trim(s.substr(0, slash)), text);
    auto den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) {
        throw InvalidInput("zero denominator in rational '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

std::string to_string(const Rational& value) {
    const auto num = boost::multiprecision::numerator(value);
    const auto den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace nlslab
