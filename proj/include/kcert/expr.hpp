#pragma once

// Expression trees for square polynomial and rational systems, and the parser
// for the plain-text system file format:
//
//   # comment
//   variables: x, y
//   param a = 0.7
//   x^2 + a*y - 1
//   x*y - 2/3
//
// Parameters are substituted as exact rational constants while parsing.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kcert/exact.hpp"

namespace kcert {

enum class NodeKind { constant, variable, add, sub, mul, div, neg, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::constant;
    ExactComplex value;        // constant
    std::size_t variable = 0;  // variable index
    int exponent = 0;          // pow
    NodePtr lhs;
    NodePtr rhs;
};

// Node constructors. Operations whose operands are all constants fold
// exactly; x^0 and x^1 simplify. Division by an exact zero constant throws
// std::domain_error.
NodePtr make_constant(ExactComplex value);
NodePtr make_variable(std::size_t index);
NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
NodePtr make_neg(NodePtr operand);
NodePtr make_pow(NodePtr base, int exponent);

enum class CoefficientKind { real, complex };

/// Square system: one expression per variable.
struct ExpressionSystem {
    std::vector<std::string> variables;
    std::vector<NodePtr> expressions;
    CoefficientKind coefficient_kind = CoefficientKind::real;

    std::size_t size() const { return variables.size(); }
    bool has_real_coefficients() const { return coefficient_kind == CoefficientKind::real; }
};

/// Validates squareness and derives the coefficient kind.
ExpressionSystem make_system(std::vector<std::string> variables, std::vector<NodePtr> expressions);

/// Syntax or semantic error in a system file, with 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

ExpressionSystem parse_system(std::string_view text);
ExpressionSystem load_system(const std::string& path);

/// Parses one expression over the given variable names (no parameters).
NodePtr parse_expression(std::string_view text, const std::vector<std::string>& variables);

std::string to_string(const Node& node, const std::vector<std::string>& variables);

}  // namespace kcert
