#include "ginibre/format.hpp"

#include "ginibre/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ginibre {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw DomainError("not a real number: '" + s + "'");
    return x;
}

std::vector<std::string> format_reals(const std::vector<double>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(format_real(x));
    return out;
}

std::vector<double> parse_reals(const std::vector<std::string>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& s : xs) out.push_back(parse_real(s));
    return out;
}

}  // namespace ginibre
