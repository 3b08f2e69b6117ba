#pragma once

#include <functional>
#include <string>

namespace gibbstree {

/// Compile a small arithmetic expression over the variables t and u.
///
/// Grammar: + - * / ^ (right-assoc power), unary minus, parentheses, numeric
/// literals, and the functions pow(x,y), exp(x), ln(x), sign(x), abs(x),
/// sqrt(x), root(n,x). root uses the real odd root for odd integer n, so
/// root(5, x) is defined for negative x.
///
/// Throws config_error on parse failure.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace gibbstree
