#include "kcert/slp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace kcert {

SlpProgram::SlpProgram(std::size_t input_count, std::vector<ExactComplex> constants, std::vector<Instruction> code,
                       std::vector<Operand> outputs)
    : input_count_(input_count), constants_(std::move(constants)), code_(std::move(code)), outputs_(std::move(outputs))
{
    auto check = [this](const Operand& o, std::size_t computed, const char* where) {
        const std::size_t limit = o.kind == Operand::Kind::input      ? input_count_
                                  : o.kind == Operand::Kind::constant ? constants_.size()
                                                                      : computed;
        if (o.index >= limit) {
            throw std::invalid_argument(std::string("straight-line program: operand out of range in ") + where);
        }
    };
    for (std::size_t k = 0; k < code_.size(); ++k) {
        const Instruction& ins = code_[k];
        check(ins.a, k, "instruction");
        if (ins.op != OpCode::neg && ins.op != OpCode::sqr) {
            check(ins.b, k, "instruction");
        }
    }
    for (const auto& o : outputs_) {
        check(o, code_.size(), "output");
    }
}

std::size_t SlpProgram::count(OpCode op) const
{
    return static_cast<std::size_t>(
        std::count_if(code_.begin(), code_.end(), [op](const Instruction& i) { return i.op == op; }));
}

bool SlpProgram::is_structural_zero(std::size_t k) const
{
    const Operand& o = outputs_.at(k);
    return o.kind == Operand::Kind::constant && constants_[o.index].is_zero();
}

namespace {

bool is_unary(OpCode op)
{
    return op == OpCode::neg || op == OpCode::sqr;
}

}  // namespace

SlpProgram eliminate_dead_code(const SlpProgram& program)
{
    const auto& code = program.code();
    std::vector<bool> live(code.size(), false);
    std::vector<bool> used_constant(program.constants().size(), false);
    auto mark = [&](const Operand& o) {
        if (o.kind == Operand::Kind::slot) {
            live[o.index] = true;
        } else if (o.kind == Operand::Kind::constant) {
            used_constant[o.index] = true;
        }
    };
    for (const auto& o : program.outputs()) {
        mark(o);
    }
    for (std::size_t k = code.size(); k-- > 0;) {
        if (!live[k]) {
            continue;
        }
        mark(code[k].a);
        if (!is_unary(code[k].op)) {
            mark(code[k].b);
        }
    }

    std::vector<std::uint32_t> slot_map(code.size());
    std::vector<std::uint32_t> constant_map(program.constants().size());
    std::vector<ExactComplex> constants;
    for (std::size_t c = 0; c < used_constant.size(); ++c) {
        if (used_constant[c]) {
            constant_map[c] = static_cast<std::uint32_t>(constants.size());
            constants.push_back(program.constants()[c]);
        }
    }
    auto remap = [&](Operand o) {
        if (o.kind == Operand::Kind::slot) {
            o.index = slot_map[o.index];
        } else if (o.kind == Operand::Kind::constant) {
            o.index = constant_map[o.index];
        }
        return o;
    };
    std::vector<Instruction> out;
    for (std::size_t k = 0; k < code.size(); ++k) {
        if (!live[k]) {
            continue;
        }
        Instruction ins = code[k];
        ins.a = remap(ins.a);
        ins.b = is_unary(ins.op) ? Operand{} : remap(ins.b);
        slot_map[k] = static_cast<std::uint32_t>(out.size());
        out.push_back(ins);
    }
    std::vector<Operand> outputs;
    for (const auto& o : program.outputs()) {
        outputs.push_back(remap(o));
    }
    return SlpProgram(program.input_count(), std::move(constants), std::move(out), std::move(outputs));
}

std::string to_string(const SlpProgram& program)
{
    auto name = [&](const Operand& o) {
        switch (o.kind) {
        case Operand::Kind::input:
            return "x" + std::to_string(o.index);
        case Operand::Kind::constant:
            return to_string(program.constants()[o.index]);
        default:
            return "t" + std::to_string(o.index);
        }
    };
    std::ostringstream os;
    for (std::size_t k = 0; k < program.code().size(); ++k) {
        const Instruction& ins = program.code()[k];
        os << 't' << k << " = ";
        switch (ins.op) {
        case OpCode::neg:
            os << '-' << name(ins.a);
            break;
        case OpCode::sqr:
            os << name(ins.a) << "^2";
            break;
        default: {
            const char* sym = ins.op == OpCode::add ? " + " : ins.op == OpCode::sub ? " - " : ins.op == OpCode::mul ? " * " : " / ";
            os << name(ins.a) << sym << name(ins.b);
        }
        }
        os << '\n';
    }
    for (std::size_t k = 0; k < program.outputs().size(); ++k) {
        os << "out" << k << " = " << name(program.outputs()[k]) << '\n';
    }
    return os.str();
}

namespace {

// Appends instructions with exact constant folding and removal of trivial
// operations (x+0, x*1, x*0, ...).
class TapeBuilder {
public:
    explicit TapeBuilder(std::size_t input_count) : input_count_(input_count) {}

    std::size_t size() const { return code_.size(); }

    Operand input(std::size_t i) const { return Operand::input(static_cast<std::uint32_t>(i)); }

    Operand constant(const ExactComplex& value)
    {
        auto it = constant_index_.find(value);
        if (it != constant_index_.end()) {
            return Operand::constant(it->second);
        }
        const auto index = static_cast<std::uint32_t>(constants_.size());
        constants_.push_back(value);
        constant_index_.emplace(value, index);
        return Operand::constant(index);
    }

    Operand zero() { return constant(ExactComplex{0}); }
    Operand one() { return constant(ExactComplex{1}); }

    const ExactComplex* value_of(const Operand& o) const
    {
        return o.kind == Operand::Kind::constant ? &constants_[o.index] : nullptr;
    }

    bool is_zero(const Operand& o) const
    {
        const auto* v = value_of(o);
        return v != nullptr && v->is_zero();
    }

    bool is_one(const Operand& o) const
    {
        const auto* v = value_of(o);
        return v != nullptr && v->is_one();
    }

    bool is_minus_one(const Operand& o) const
    {
        const auto* v = value_of(o);
        return v != nullptr && *v == ExactComplex{-1};
    }

    Operand add(Operand a, Operand b)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            if (const auto* vb = value_of(b); vb != nullptr) {
                return constant(*va + *vb);
            }
        }
        if (is_zero(a)) {
            return b;
        }
        if (is_zero(b)) {
            return a;
        }
        return emit(OpCode::add, a, b);
    }

    Operand sub(Operand a, Operand b)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            if (const auto* vb = value_of(b); vb != nullptr) {
                return constant(*va - *vb);
            }
        }
        if (is_zero(b)) {
            return a;
        }
        if (is_zero(a)) {
            return neg(b);
        }
        return emit(OpCode::sub, a, b);
    }

    Operand mul(Operand a, Operand b)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            if (const auto* vb = value_of(b); vb != nullptr) {
                return constant(*va * *vb);
            }
        }
        if (is_zero(a) || is_zero(b)) {
            return zero();
        }
        if (is_one(a)) {
            return b;
        }
        if (is_one(b)) {
            return a;
        }
        if (is_minus_one(a)) {
            return neg(b);
        }
        if (is_minus_one(b)) {
            return neg(a);
        }
        return emit(OpCode::mul, a, b);
    }

    Operand div(Operand a, Operand b)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            if (const auto* vb = value_of(b); vb != nullptr) {
                return constant(*va / *vb);
            }
        }
        if (is_zero(b)) {
            throw std::domain_error("division by exact zero constant");
        }
        if (is_one(b)) {
            return a;
        }
        if (is_zero(a)) {
            return zero();
        }
        return emit(OpCode::div, a, b);
    }

    Operand neg(Operand a)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            return constant(-*va);
        }
        return emit(OpCode::neg, a, Operand{});
    }

    Operand sqr(Operand a)
    {
        if (const auto* va = value_of(a); va != nullptr) {
            return constant(*va * *va);
        }
        return emit(OpCode::sqr, a, Operand{});
    }

    /// Left-to-right binary powering: squarings, plus one multiplication by
    /// the base for each set bit below the leading one.
    Operand pow(Operand a, int exponent)
    {
        if (exponent == 0) {
            return one();
        }
        if (exponent < 0) {
            return div(one(), pow(a, -exponent));
        }
        int top = 0;
        while ((exponent >> (top + 1)) != 0) {
            ++top;
        }
        Operand r = a;
        for (int bit = top - 1; bit >= 0; --bit) {
            r = sqr(r);
            if ((exponent >> bit) & 1) {
                r = mul(r, a);
            }
        }
        return r;
    }

    SlpProgram finish(std::vector<Operand> outputs) const
    {
        return SlpProgram(input_count_, constants_, code_, std::move(outputs));
    }

private:
    Operand emit(OpCode op, Operand a, Operand b)
    {
        code_.push_back(Instruction{op, a, b});
        return Operand::slot(static_cast<std::uint32_t>(code_.size() - 1));
    }

    std::size_t input_count_;
    std::vector<ExactComplex> constants_;
    std::map<ExactComplex, std::uint32_t> constant_index_;
    std::vector<Instruction> code_;
};

using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, ExactComplex>;

void add_term(Polynomial& p, const Monomial& m, const ExactComplex& c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) {
            p.erase(it);
        }
    }
}

std::optional<Polynomial> multiply(const Polynomial& a, const Polynomial& b, std::size_t max_terms)
{
    if (a.size() * b.size() > max_terms * 8) {
        return std::nullopt;
    }
    Polynomial out;
    Monomial m;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            m = ma;
            for (std::size_t k = 0; k < m.size(); ++k) {
                m[k] += mb[k];
            }
            add_term(out, m, ca * cb);
        }
    }
    if (out.size() > max_terms) {
        return std::nullopt;
    }
    return out;
}

// Expanded polynomial form, or nullopt for rational expressions and
// expansions that grow past the term limit.
std::optional<Polynomial> expand(const Node& node, std::size_t n, std::size_t max_terms)
{
    switch (node.kind) {
    case NodeKind::constant: {
        Polynomial p;
        add_term(p, Monomial(n, 0), node.value);
        return p;
    }
    case NodeKind::variable: {
        Polynomial p;
        Monomial m(n, 0);
        m[node.variable] = 1;
        add_term(p, m, ExactComplex{1});
        return p;
    }
    case NodeKind::add:
    case NodeKind::sub: {
        auto a = expand(*node.lhs, n, max_terms);
        if (!a) {
            return std::nullopt;
        }
        auto b = expand(*node.rhs, n, max_terms);
        if (!b) {
            return std::nullopt;
        }
        for (const auto& [m, c] : *b) {
            add_term(*a, m, node.kind == NodeKind::add ? c : -c);
        }
        if (a->size() > max_terms) {
            return std::nullopt;
        }
        return a;
    }
    case NodeKind::neg: {
        auto a = expand(*node.lhs, n, max_terms);
        if (a) {
            for (auto& [m, c] : *a) {
                c = -c;
            }
        }
        return a;
    }
    case NodeKind::mul: {
        auto a = expand(*node.lhs, n, max_terms);
        if (!a) {
            return std::nullopt;
        }
        auto b = expand(*node.rhs, n, max_terms);
        if (!b) {
            return std::nullopt;
        }
        return multiply(*a, *b, max_terms);
    }
    case NodeKind::div: {
        if (node.rhs->kind != NodeKind::constant) {
            return std::nullopt;
        }
        auto a = expand(*node.lhs, n, max_terms);
        if (a) {
            for (auto& [m, c] : *a) {
                c = c / node.rhs->value;
            }
        }
        return a;
    }
    case NodeKind::pow: {
        if (node.exponent < 0) {
            return std::nullopt;
        }
        auto base = expand(*node.lhs, n, max_terms);
        if (!base) {
            return std::nullopt;
        }
        Polynomial result;
        add_term(result, Monomial(n, 0), ExactComplex{1});
        for (int k = 0; k < node.exponent; ++k) {
            auto next = multiply(result, *base, max_terms);
            if (!next) {
                return std::nullopt;
            }
            result = std::move(*next);
        }
        return result;
    }
    }
    return std::nullopt;
}

bool is_polynomial(const Node& node)
{
    switch (node.kind) {
    case NodeKind::constant:
    case NodeKind::variable:
        return true;
    case NodeKind::div:
        return node.rhs->kind == NodeKind::constant && is_polynomial(*node.lhs);
    case NodeKind::pow:
        return node.exponent >= 0 && is_polynomial(*node.lhs);
    case NodeKind::neg:
        return is_polynomial(*node.lhs);
    default:
        return is_polynomial(*node.lhs) && is_polynomial(*node.rhs);
    }
}

// Variables by decreasing maximal degree in p, ties by declaration order.
std::vector<std::size_t> horner_order(const Polynomial& p, std::size_t n)
{
    std::vector<int> degree(n, 0);
    for (const auto& [m, c] : p) {
        for (std::size_t k = 0; k < n; ++k) {
            degree[k] = std::max(degree[k], m[k]);
        }
    }
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < n; ++k) {
        if (degree[k] > 0) {
            order.push_back(k);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    return order;
}

// p = c_{e1} v^{e1} + ... + c_{em} v^{em} with e1 > ... > em is emitted as
// ((c_{e1} v^{e1-e2} + c_{e2}) v^{e2-e3} + ...) v^{em}, recursing into the
// coefficients with the remaining variables.
Operand emit_horner(TapeBuilder& b, const Polynomial& p, const std::vector<std::size_t>& order, std::size_t depth)
{
    if (p.empty()) {
        return b.zero();
    }
    while (depth < order.size()) {
        const std::size_t v = order[depth];
        bool present = false;
        for (const auto& [m, c] : p) {
            if (m[v] > 0) {
                present = true;
                break;
            }
        }
        if (present) {
            break;
        }
        ++depth;
    }
    if (depth == order.size()) {
        return b.constant(p.begin()->second);
    }
    const std::size_t v = order[depth];
    std::map<int, Polynomial, std::greater<>> by_power;
    for (const auto& [m, c] : p) {
        Monomial rest = m;
        rest[v] = 0;
        by_power[m[v]].emplace(std::move(rest), c);
    }
    auto it = by_power.begin();
    Operand acc = emit_horner(b, it->second, order, depth + 1);
    int previous = it->first;
    for (++it; it != by_power.end(); ++it) {
        acc = b.mul(acc, b.pow(b.input(v), previous - it->first));
        acc = b.add(acc, emit_horner(b, it->second, order, depth + 1));
        previous = it->first;
    }
    if (previous > 0) {
        acc = b.mul(acc, b.pow(b.input(v), previous));
    }
    return acc;
}

Operand emit_expanded(TapeBuilder& b, const Polynomial& p)
{
    Operand acc = b.zero();
    for (const auto& [m, c] : p) {
        Operand term = b.constant(c);
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] > 0) {
                term = b.mul(term, b.pow(b.input(k), m[k]));
            }
        }
        acc = b.add(acc, term);
    }
    return acc;
}

class Emitter {
public:
    Emitter(TapeBuilder& builder, std::size_t n, const CompileOptions& options)
        : b_(builder), n_(n), options_(options)
    {
    }

    Operand emit(const Node& node)
    {
        if (options_.strategy != TapeStrategy::structural && node.kind != NodeKind::constant &&
            node.kind != NodeKind::variable && is_polynomial(node)) {
            if (auto poly = expand(node, n_, options_.max_terms)) {
                return emit_polynomial(node, *poly);
            }
        }
        return emit_structural(node, options_.strategy == TapeStrategy::automatic);
    }

private:
    Operand emit_polynomial(const Node& node, const Polynomial& poly)
    {
        switch (options_.strategy) {
        case TapeStrategy::expanded:
            return emit_expanded(b_, poly);
        case TapeStrategy::horner:
            return emit_horner(b_, poly, horner_order(poly, n_), 0);
        default:
            break;
        }
        TapeBuilder trial = b_;
        const std::size_t before = trial.size();
        Emitter plain(trial, n_, CompileOptions{TapeStrategy::structural, options_.max_terms});
        plain.emit_structural(node, false);
        const std::size_t structural_cost = trial.size() - before;

        TapeBuilder horner = b_;
        const Operand h = emit_horner(horner, poly, horner_order(poly, n_), 0);
        const std::size_t horner_cost = horner.size() - before;
        if (horner_cost <= structural_cost) {
            b_ = std::move(horner);
            return h;
        }
        return emit_structural(node, false);
    }

    // With `recurse` set, children get their own polynomial/structural choice.
    Operand emit_structural(const Node& node, bool recurse)
    {
        auto child = [&](const NodePtr& c) { return recurse ? emit(*c) : emit_structural(*c, false); };
        switch (node.kind) {
        case NodeKind::constant:
            return b_.constant(node.value);
        case NodeKind::variable:
            return b_.input(node.variable);
        case NodeKind::add:
            return b_.add(child(node.lhs), child(node.rhs));
        case NodeKind::sub:
            return b_.sub(child(node.lhs), child(node.rhs));
        case NodeKind::mul:
            return b_.mul(child(node.lhs), child(node.rhs));
        case NodeKind::div:
            return b_.div(child(node.lhs), child(node.rhs));
        case NodeKind::neg:
            return b_.neg(child(node.lhs));
        case NodeKind::pow:
            return b_.pow(child(node.lhs), node.exponent);
        }
        return b_.zero();
    }

    TapeBuilder& b_;
    std::size_t n_;
    CompileOptions options_;
};

}  // namespace

SlpProgram compile_expressions(const std::vector<NodePtr>& expressions, std::size_t input_count,
                               const CompileOptions& options)
{
    TapeBuilder builder(input_count);
    Emitter emitter(builder, input_count, options);
    std::vector<Operand> outputs;
    outputs.reserve(expressions.size());
    for (const auto& e : expressions) {
        outputs.push_back(emitter.emit(*e));
    }
    return eliminate_dead_code(builder.finish(std::move(outputs)));
}

SlpProgram differentiate(const SlpProgram& program)
{
    const std::size_t n = program.input_count();
    TapeBuilder b(n);
    const auto& code = program.code();

    auto primal_of = [&](const std::vector<Operand>& slots, const Operand& o) {
        switch (o.kind) {
        case Operand::Kind::input:
            return b.input(o.index);
        case Operand::Kind::constant:
            return b.constant(program.constants()[o.index]);
        default:
            return slots[o.index];
        }
    };

    std::vector<Operand> primal(code.size());
    for (std::size_t k = 0; k < code.size(); ++k) {
        const Instruction& ins = code[k];
        const Operand a = primal_of(primal, ins.a);
        switch (ins.op) {
        case OpCode::add:
            primal[k] = b.add(a, primal_of(primal, ins.b));
            break;
        case OpCode::sub:
            primal[k] = b.sub(a, primal_of(primal, ins.b));
            break;
        case OpCode::mul:
            primal[k] = b.mul(a, primal_of(primal, ins.b));
            break;
        case OpCode::div:
            primal[k] = b.div(a, primal_of(primal, ins.b));
            break;
        case OpCode::neg:
            primal[k] = b.neg(a);
            break;
        case OpCode::sqr:
            primal[k] = b.sqr(a);
            break;
        }
    }

    std::vector<Operand> outputs(program.output_count() * n);
    std::vector<Operand> tangent(code.size());
    for (std::size_t dir = 0; dir < n; ++dir) {
        auto tangent_of = [&](const Operand& o) {
            switch (o.kind) {
            case Operand::Kind::input:
                return o.index == dir ? b.one() : b.zero();
            case Operand::Kind::constant:
                return b.zero();
            default:
                return tangent[o.index];
            }
        };
        for (std::size_t k = 0; k < code.size(); ++k) {
            const Instruction& ins = code[k];
            const Operand da = tangent_of(ins.a);
            switch (ins.op) {
            case OpCode::add:
                tangent[k] = b.add(da, tangent_of(ins.b));
                break;
            case OpCode::sub:
                tangent[k] = b.sub(da, tangent_of(ins.b));
                break;
            case OpCode::mul: {
                const Operand a = primal_of(primal, ins.a);
                const Operand c = primal_of(primal, ins.b);
                tangent[k] = b.add(b.mul(da, c), b.mul(a, tangent_of(ins.b)));
                break;
            }
            case OpCode::div: {
                // d(a/c) = (da - (a/c) dc) / c
                const Operand c = primal_of(primal, ins.b);
                const Operand dc = tangent_of(ins.b);
                tangent[k] = b.div(b.sub(da, b.mul(primal[k], dc)), c);
                break;
            }
            case OpCode::neg:
                tangent[k] = b.neg(da);
                break;
            case OpCode::sqr: {
                const Operand a = primal_of(primal, ins.a);
                tangent[k] = b.mul(b.constant(ExactComplex{2}), b.mul(a, da));
                break;
            }
            }
        }
        for (std::size_t i = 0; i < program.output_count(); ++i) {
            outputs[i * n + dir] = tangent_of(program.outputs()[i]);
        }
    }
    return eliminate_dead_code(b.finish(std::move(outputs)));
}

CompiledSystem compile(const ExpressionSystem& system, const CompileOptions& options)
{
    CompiledSystem out;
    out.source = system;
    out.f = compile_expressions(system.expressions, system.size(), options);
    out.jacobian = differentiate(out.f);
    return out;
}

bool certify_positive_evaluation(const CompiledSystem& sys, const std::vector<RealInterval<double>>& box)
{
    if (!sys.has_real_coefficients()) {
        return false;
    }
    if (box.size() != sys.size()) {
        throw DimensionError("certify_positive_evaluation: box dimension does not match the system");
    }
    IntervalBox<double> input;
    input.reserve(box.size());
    for (const auto& x : box) {
        input.emplace_back(x, RealInterval<double>(0.0, 0.0));
    }
    IntervalBox<double> image;
    try {
        image = eval_interval(sys.f, input);
    } catch (const EnclosureError&) {
        return false;
    }
    const double u = PrecisionLevel{kNativeBits}.unit_roundoff();
    for (const auto& y : image) {
        if (!(y.re().lo() > 0.0)) {
            return false;
        }
        const double tolerance = 4.0 * u * y.re().hi();
        if (y.im().mag() > tolerance) {
            return false;
        }
    }
    return true;
}

}  // namespace kcert
