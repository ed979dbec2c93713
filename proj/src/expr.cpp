#include "kcert/expr.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace kcert {

NodePtr make_constant(ExactComplex value)
{
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::constant;
    node->value = std::move(value);
    return node;
}

NodePtr make_variable(std::size_t index)
{
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::variable;
    node->variable = index;
    return node;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs)
{
    if (lhs->kind == NodeKind::constant && rhs->kind == NodeKind::constant) {
        switch (kind) {
        case NodeKind::add:
            return make_constant(lhs->value + rhs->value);
        case NodeKind::sub:
            return make_constant(lhs->value - rhs->value);
        case NodeKind::mul:
            return make_constant(lhs->value * rhs->value);
        case NodeKind::div:
            return make_constant(lhs->value / rhs->value);
        default:
            break;
        }
    }
    if (kind == NodeKind::div && rhs->kind == NodeKind::constant && rhs->value.is_zero()) {
        throw std::domain_error("division by exact zero constant");
    }
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

NodePtr make_neg(NodePtr operand)
{
    if (operand->kind == NodeKind::constant) {
        return make_constant(-operand->value);
    }
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::neg;
    node->lhs = std::move(operand);
    return node;
}

NodePtr make_pow(NodePtr base, int exponent)
{
    if (base->kind == NodeKind::constant) {
        return make_constant(pow(base->value, exponent));
    }
    if (exponent == 0) {
        return make_constant(ExactComplex{1});
    }
    if (exponent == 1) {
        return base;
    }
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::pow;
    node->lhs = std::move(base);
    node->exponent = exponent;
    return node;
}

namespace {

bool all_constants_real(const Node& node)
{
    switch (node.kind) {
    case NodeKind::constant:
        return node.value.is_real();
    case NodeKind::variable:
        return true;
    default:
        return (!node.lhs || all_constants_real(*node.lhs)) && (!node.rhs || all_constants_real(*node.rhs));
    }
}

}  // namespace

ExpressionSystem make_system(std::vector<std::string> variables, std::vector<NodePtr> expressions)
{
    if (variables.empty()) {
        throw std::invalid_argument("system declares no variables");
    }
    if (variables.size() != expressions.size()) {
        throw std::invalid_argument("non-square system: " + std::to_string(variables.size()) + " variables but " +
                                    std::to_string(expressions.size()) + " equations");
    }
    ExpressionSystem sys;
    sys.variables = std::move(variables);
    sys.expressions = std::move(expressions);
    sys.coefficient_kind = CoefficientKind::real;
    for (const auto& e : sys.expressions) {
        if (!all_constants_real(*e)) {
            sys.coefficient_kind = CoefficientKind::complex;
            break;
        }
    }
    return sys;
}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column)
{
}

namespace {

struct SymbolTable {
    std::map<std::string, std::size_t, std::less<>> variables;
    std::map<std::string, ExactComplex, std::less<>> parameters;
};

bool is_identifier_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Recursive-descent parser over a single line.
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('+'|'-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | 'i' | '(' expr ')'
class LineParser {
public:
    LineParser(std::string_view text, std::size_t line, std::size_t column_offset, const SymbolTable& symbols)
        : text_(text), line_(line), offset_(column_offset), symbols_(symbols)
    {
    }

    NodePtr parse_all()
    {
        NodePtr node = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, offset_ + pos_ + 1); }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    template <class Fn>
    NodePtr guarded(Fn fn)
    {
        const std::size_t at = pos_;
        try {
            return fn();
        } catch (const std::domain_error& e) {
            pos_ = at;
            fail(e.what());
        }
    }

    NodePtr expr()
    {
        NodePtr node = term();
        for (;;) {
            if (accept('+')) {
                NodePtr rhs = term();
                node = make_binary(NodeKind::add, node, rhs);
            } else if (accept('-')) {
                NodePtr rhs = term();
                node = make_binary(NodeKind::sub, node, rhs);
            } else {
                return node;
            }
        }
    }

    NodePtr term()
    {
        NodePtr node = unary();
        for (;;) {
            if (accept('*')) {
                NodePtr rhs = unary();
                node = make_binary(NodeKind::mul, node, rhs);
            } else if (accept('/')) {
                NodePtr rhs = unary();
                node = guarded([&] { return make_binary(NodeKind::div, node, rhs); });
            } else {
                return node;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            return make_neg(unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) {
            const std::size_t at = pos_;
            NodePtr e = unary();
            if (e->kind != NodeKind::constant || !e->value.is_real() || e->value.re.get_den() != 1) {
                pos_ = at;
                fail("exponent must be an integer constant");
            }
            const mpz_class& k = e->value.re.get_num();
            if (!k.fits_sint_p() || abs(k) > 4096) {
                pos_ = at;
                fail("exponent out of range");
            }
            const int exponent = static_cast<int>(k.get_si());
            return guarded([&] { return make_pow(base, exponent); });
        }
        return base;
    }

    NodePtr primary()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t look = pos_ + 1;
                if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                    ++look;
                }
                if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                    pos_ = look;
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                        ++pos_;
                    }
                }
            }
            try {
                return make_constant(ExactComplex{parse_decimal(text_.substr(start, pos_ - start))});
            } catch (const std::invalid_argument& e) {
                pos_ = start;
                fail(e.what());
            }
        }
        if (is_identifier_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_identifier_char(text_[pos_])) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "i") {
                return make_constant(ExactComplex{0, 1});
            }
            if (auto v = symbols_.variables.find(name); v != symbols_.variables.end()) {
                return make_variable(v->second);
            }
            if (auto p = symbols_.parameters.find(name); p != symbols_.parameters.end()) {
                return make_constant(p->second);
            }
            pos_ = start;
            fail("undeclared identifier '" + std::string(name) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t offset_;
    const SymbolTable& symbols_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool valid_identifier(std::string_view name)
{
    if (name.empty() || !is_identifier_start(name.front())) {
        return false;
    }
    for (char c : name) {
        if (!is_identifier_char(c)) {
            return false;
        }
    }
    return true;
}

std::size_t column_of(std::string_view line, std::string_view part)
{
    return static_cast<std::size_t>(part.data() - line.data()) + 1;
}

}  // namespace

ExpressionSystem parse_system(std::string_view text)
{
    SymbolTable symbols;
    std::vector<std::string> variables;
    std::vector<NodePtr> expressions;
    bool have_variables = false;
    std::size_t line_no = 0;
    std::size_t last_line = 0;

    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view raw = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.remove_suffix(1);
        }
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        last_line = line_no;

        if (line.starts_with("variables:")) {
            if (have_variables) {
                throw ParseError("duplicate 'variables:' declaration", line_no, column_of(raw, line));
            }
            have_variables = true;
            std::string_view rest = line.substr(10);
            while (true) {
                const std::size_t comma = rest.find(',');
                const std::string_view name = trim(rest.substr(0, comma));
                if (!valid_identifier(name) || name == "i") {
                    throw ParseError("invalid variable name '" + std::string(name) + "'", line_no,
                                     column_of(raw, name.empty() ? rest : name));
                }
                if (symbols.variables.count(name) != 0) {
                    throw ParseError("duplicate variable '" + std::string(name) + "'", line_no, column_of(raw, name));
                }
                symbols.variables.emplace(std::string(name), variables.size());
                variables.emplace_back(name);
                if (comma == std::string_view::npos) {
                    break;
                }
                rest.remove_prefix(comma + 1);
            }
            continue;
        }

        if (line.starts_with("param") && line.size() > 5 && std::isspace(static_cast<unsigned char>(line[5]))) {
            const std::string_view body = line.substr(6);
            const std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError("expected 'param <name> = <value>'", line_no, column_of(raw, body));
            }
            const std::string_view name = trim(body.substr(0, eq));
            if (!valid_identifier(name) || name == "i") {
                throw ParseError("invalid parameter name '" + std::string(name) + "'", line_no, column_of(raw, body));
            }
            if (symbols.variables.count(name) != 0 || symbols.parameters.count(name) != 0) {
                throw ParseError("parameter '" + std::string(name) + "' shadows an existing name", line_no,
                                 column_of(raw, name));
            }
            const std::string_view value_text = body.substr(eq + 1);
            SymbolTable constants_only;
            constants_only.parameters = symbols.parameters;
            NodePtr value =
                LineParser(value_text, line_no, column_of(raw, value_text) - 1, constants_only).parse_all();
            if (value->kind != NodeKind::constant) {
                throw ParseError("parameter value must be constant", line_no, column_of(raw, value_text));
            }
            symbols.parameters.emplace(std::string(name), value->value);
            continue;
        }

        if (!have_variables) {
            throw ParseError("expected 'variables:' before the first equation", line_no, column_of(raw, line));
        }
        expressions.push_back(LineParser(line, line_no, column_of(raw, line) - 1, symbols).parse_all());
    }

    if (!have_variables) {
        throw ParseError("missing 'variables:' declaration", line_no == 0 ? 1 : line_no, 1);
    }
    try {
        return make_system(std::move(variables), std::move(expressions));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), last_line == 0 ? 1 : last_line, 1);
    }
}

ExpressionSystem load_system(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open system file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_system(buffer.str());
}

NodePtr parse_expression(std::string_view text, const std::vector<std::string>& variables)
{
    SymbolTable symbols;
    for (std::size_t k = 0; k < variables.size(); ++k) {
        symbols.variables.emplace(variables[k], k);
    }
    return LineParser(text, 1, 0, symbols).parse_all();
}

std::string to_string(const Node& node, const std::vector<std::string>& variables)
{
    switch (node.kind) {
    case NodeKind::constant:
        return to_string(node.value);
    case NodeKind::variable:
        return node.variable < variables.size() ? variables[node.variable] : "x" + std::to_string(node.variable);
    case NodeKind::neg:
        return "-(" + to_string(*node.lhs, variables) + ")";
    case NodeKind::pow:
        return "(" + to_string(*node.lhs, variables) + ")^" + std::to_string(node.exponent);
    default:
        break;
    }
    const char* op = node.kind == NodeKind::add ? " + " : node.kind == NodeKind::sub ? " - " : node.kind == NodeKind::mul ? "*" : "/";
    return "(" + to_string(*node.lhs, variables) + op + to_string(*node.rhs, variables) + ")";
}

}  // namespace kcert
