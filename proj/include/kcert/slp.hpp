#pragma once

// Straight-line programs: branch-free instruction tapes for F and its
// Jacobian, evaluated over complex points or complex interval boxes.
//
// Interval evaluation of a tape depends on the tape, not only on the
// polynomial it computes, since interval arithmetic is only subdistributive.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcert/exact.hpp"
#include "kcert/expr.hpp"
#include "kcert/linalg.hpp"

namespace kcert {

enum class OpCode : std::uint8_t { add, sub, mul, div, neg, sqr };

struct Operand {
    enum class Kind : std::uint8_t { input, constant, slot };
    Kind kind = Kind::constant;
    std::uint32_t index = 0;

    static Operand input(std::uint32_t i) { return {Kind::input, i}; }
    static Operand constant(std::uint32_t i) { return {Kind::constant, i}; }
    static Operand slot(std::uint32_t i) { return {Kind::slot, i}; }

    friend bool operator==(const Operand&, const Operand&) = default;
};

/// Result goes to the slot numbered by the instruction's position. Unary
/// instructions ignore `b`.
struct Instruction {
    OpCode op = OpCode::add;
    Operand a;
    Operand b;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

class SlpProgram {
public:
    SlpProgram() = default;
    /// Throws std::invalid_argument if an instruction reads a slot that is not
    /// yet computed or an operand is out of range.
    SlpProgram(std::size_t input_count, std::vector<ExactComplex> constants, std::vector<Instruction> code,
               std::vector<Operand> outputs);

    std::size_t input_count() const { return input_count_; }
    std::size_t output_count() const { return outputs_.size(); }
    std::size_t workspace_size() const { return code_.size(); }
    std::size_t instruction_count() const { return code_.size(); }
    std::size_t count(OpCode op) const;

    const std::vector<ExactComplex>& constants() const { return constants_; }
    const std::vector<Instruction>& code() const { return code_; }
    const std::vector<Operand>& outputs() const { return outputs_; }

    /// True when output `k` is the constant zero (no instruction computes it).
    bool is_structural_zero(std::size_t k) const;

    friend bool operator==(const SlpProgram&, const SlpProgram&) = default;

private:
    std::size_t input_count_ = 0;
    std::vector<ExactComplex> constants_;
    std::vector<Instruction> code_;
    std::vector<Operand> outputs_;
};

/// Removes instructions and constants that no output depends on.
SlpProgram eliminate_dead_code(const SlpProgram& program);

std::string to_string(const SlpProgram& program);

enum class TapeStrategy {
    structural,  ///< follow the expression tree as written
    expanded,    ///< sum of monomials
    horner,      ///< multivariate Horner form of the expanded polynomial
    automatic,   ///< per polynomial subexpression, the shorter of structural and Horner (ties go to Horner)
};

struct CompileOptions {
    TapeStrategy strategy = TapeStrategy::automatic;
    /// Expansion is abandoned (structural fallback) past this many terms.
    std::size_t max_terms = 20000;
};

/// F and its Jacobian as tapes. The Jacobian tape has n*n outputs in
/// row-major order: output i*n + j is dF_i/dx_j.
struct CompiledSystem {
    SlpProgram f;
    SlpProgram jacobian;
    ExpressionSystem source;

    std::size_t size() const { return source.size(); }
    bool has_real_coefficients() const { return source.has_real_coefficients(); }
};

/// Tape for the given expressions over `input_count` inputs.
SlpProgram compile_expressions(const std::vector<NodePtr>& expressions, std::size_t input_count,
                               const CompileOptions& options = {});

/// Forward-mode differentiation of a tape, followed by dead-code elimination.
SlpProgram differentiate(const SlpProgram& program);

CompiledSystem compile(const ExpressionSystem& system, const CompileOptions& options = {});

/// Division by zero during point evaluation.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interval evaluation hit a divisor containing zero; the caller may shrink
/// the box or raise the precision.
class EnclosureError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

template <class V>
struct ValueTraits;

template <class T>
struct ValueTraits<Complex<T>> {
    using Error = EvaluationError;
    static Complex<T> constant(const ExactComplex& c, PrecisionLevel level)
    {
        return {ScalarTraits<T>::from_rational(c.re, Rounding::nearest, level),
                ScalarTraits<T>::from_rational(c.im, Rounding::nearest, level)};
    }
};

template <class T>
struct ValueTraits<ComplexInterval<T>> {
    using Error = EnclosureError;
    static ComplexInterval<T> constant(const ExactComplex& c, PrecisionLevel level)
    {
        return {RealInterval<T>(ScalarTraits<T>::from_rational(c.re, Rounding::down, level),
                                ScalarTraits<T>::from_rational(c.re, Rounding::up, level)),
                RealInterval<T>(ScalarTraits<T>::from_rational(c.im, Rounding::down, level),
                                ScalarTraits<T>::from_rational(c.im, Rounding::up, level))};
    }
};

/// Evaluates one tape repeatedly. Holds the converted constant pool and the
/// scratch slots, so each thread should own its evaluator.
template <class V>
class TapeEvaluator {
public:
    TapeEvaluator(const SlpProgram& program, PrecisionLevel level) : program_(&program), level_(level)
    {
        constants_.reserve(program.constants().size());
        for (const auto& c : program.constants()) {
            constants_.push_back(ValueTraits<V>::constant(c, level));
        }
        slots_.resize(program.workspace_size());
    }

    PrecisionLevel level() const { return level_; }

    void run(std::span<const V> inputs, std::span<V> outputs)
    {
        const SlpProgram& p = *program_;
        if (inputs.size() != p.input_count() || outputs.size() != p.output_count()) {
            throw DimensionError("tape evaluation: argument sizes do not match the program");
        }
        const auto& code = p.code();
        for (std::size_t k = 0; k < code.size(); ++k) {
            const Instruction& ins = code[k];
            const V& a = fetch(ins.a, inputs);
            try {
                switch (ins.op) {
                case OpCode::add:
                    slots_[k] = a + fetch(ins.b, inputs);
                    break;
                case OpCode::sub:
                    slots_[k] = a - fetch(ins.b, inputs);
                    break;
                case OpCode::mul:
                    slots_[k] = a * fetch(ins.b, inputs);
                    break;
                case OpCode::div:
                    slots_[k] = a / fetch(ins.b, inputs);
                    break;
                case OpCode::neg:
                    slots_[k] = -a;
                    break;
                case OpCode::sqr:
                    slots_[k] = square(a);
                    break;
                }
            } catch (const DomainError& e) {
                throw typename ValueTraits<V>::Error("instruction " + std::to_string(k) + ": " + e.what());
            }
        }
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            outputs[k] = fetch(p.outputs()[k], inputs);
        }
    }

private:
    const V& fetch(const Operand& o, std::span<const V> inputs) const
    {
        switch (o.kind) {
        case Operand::Kind::input:
            return inputs[o.index];
        case Operand::Kind::constant:
            return constants_[o.index];
        default:
            return slots_[o.index];
        }
    }

    const SlpProgram* program_;
    PrecisionLevel level_;
    std::vector<V> constants_;
    std::vector<V> slots_;
};

/// Floating-point evaluation at the precision carried by `x`; no enclosure
/// guarantee. Throws EvaluationError on division by zero.
template <class T>
ComplexVector<T> eval_point(const SlpProgram& program, const ComplexVector<T>& x)
{
    if (x.empty()) {
        throw DimensionError("eval_point: empty input");
    }
    TapeEvaluator<Complex<T>> eval(program, precision_of(x.front().re));
    ComplexVector<T> out(program.output_count());
    eval.run(x, out);
    return out;
}

/// Interval enclosure of the tape over `box`. Throws EnclosureError when a
/// divisor interval contains zero.
template <class T>
IntervalBox<T> eval_interval(const SlpProgram& program, const IntervalBox<T>& box)
{
    if (box.empty()) {
        throw DimensionError("eval_interval: empty input");
    }
    TapeEvaluator<ComplexInterval<T>> eval(program, precision_of(box.front().re().lo()));
    IntervalBox<T> out(program.output_count());
    eval.run(box, out);
    return out;
}

/// Jacobian at a point as an n x n matrix.
template <class T>
ComplexMatrix<T> jacobian_point(const CompiledSystem& sys, const ComplexVector<T>& x)
{
    const ComplexVector<T> flat = eval_point(sys.jacobian, x);
    const std::size_t n = sys.size();
    ComplexMatrix<T> out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = flat[i * n + j];
        }
    }
    return out;
}

/// Interval enclosure of the Jacobian over `box`.
template <class T>
IntervalMatrix<T> jacobian_interval(const CompiledSystem& sys, const IntervalBox<T>& box)
{
    const IntervalBox<T> flat = eval_interval(sys.jacobian, box);
    const std::size_t n = sys.size();
    IntervalMatrix<T> out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = flat[i * n + j];
        }
    }
    return out;
}

/// Proves F > 0 on the real box J: succeeds when every output of the
/// enclosure over J + i[0,0] has a strictly positive real part and an
/// imaginary part within rounding distance of zero. `false` means "not
/// proven". Requires real coefficients.
bool certify_positive_evaluation(const CompiledSystem& sys, const std::vector<RealInterval<double>>& box);

}  // namespace kcert
