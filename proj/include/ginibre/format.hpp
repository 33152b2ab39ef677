#pragma once

#include <string>
#include <vector>

namespace ginibre {

// Shortest decimal form with 17 significant digits (lossless for double).
std::string format_real(double x);
double parse_real(const std::string& s);

std::vector<std::string> format_reals(const std::vector<double>& xs);
std::vector<double> parse_reals(const std::vector<std::string>& xs);

}  // namespace ginibre
