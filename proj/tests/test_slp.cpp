#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kcert/slp.hpp"
#include "oracle.hpp"

using kcert::CompileOptions;
using kcert::ComplexVector;
using kcert::IntervalBox;
using kcert::OpCode;
using kcert::TapeStrategy;
using RI = kcert::RealInterval<double>;
using CI = kcert::ComplexInterval<double>;
using C = kcert::Complex<double>;

namespace {

CI real_ci(double lo, double hi)
{
    return {RI(lo, hi), RI(0, 0)};
}

kcert::SlpProgram tape(const std::string& text, std::size_t n, TapeStrategy strategy)
{
    std::vector<std::string> names{"x", "y", "z", "w"};
    names.resize(n);
    return kcert::compile_expressions({kcert::parse_expression(text, names)}, n, CompileOptions{strategy});
}

// Exact value and partial derivative along `dir`, by forward mode in
// rational arithmetic. Independent of the tape machinery.
std::pair<oracle::QComplex, oracle::QComplex> exact_with_derivative(const kcert::Node& node,
                                                                   const std::vector<oracle::QComplex>& x,
                                                                   std::size_t dir)
{
    using Q = oracle::QComplex;
    switch (node.kind) {
    case kcert::NodeKind::constant:
        return {Q{node.value.re, node.value.im}, Q{}};
    case kcert::NodeKind::variable:
        return {x[node.variable], node.variable == dir ? Q{1, 0} : Q{}};
    case kcert::NodeKind::neg: {
        auto [v, d] = exact_with_derivative(*node.lhs, x, dir);
        return {Q{} - v, Q{} - d};
    }
    case kcert::NodeKind::pow: {
        auto [v, d] = exact_with_derivative(*node.lhs, x, dir);
        Q r{1, 0};
        Q dr{};
        for (int k = 0; k < node.exponent; ++k) {
            dr = dr * v + r * d;
            r = r * v;
        }
        return {r, dr};
    }
    default:
        break;
    }
    auto [a, da] = exact_with_derivative(*node.lhs, x, dir);
    auto [b, db] = exact_with_derivative(*node.rhs, x, dir);
    switch (node.kind) {
    case kcert::NodeKind::add:
        return {a + b, da + db};
    case kcert::NodeKind::sub:
        return {a - b, da - db};
    case kcert::NodeKind::mul:
        return {a * b, da * b + a * db};
    default: {
        const Q q = a / b;
        return {q, (da - q * db) / b};
    }
    }
}

// Bound on the sum of absolute values of all terms of the expanded polynomial.
double absolute_scale(const kcert::Node& node, const ComplexVector<double>& x)
{
    switch (node.kind) {
    case kcert::NodeKind::constant:
        return std::hypot(node.value.re.get_d(), node.value.im.get_d());
    case kcert::NodeKind::variable:
        return std::hypot(x[node.variable].re, x[node.variable].im);
    case kcert::NodeKind::neg:
        return absolute_scale(*node.lhs, x);
    case kcert::NodeKind::pow:
        return std::pow(absolute_scale(*node.lhs, x), node.exponent);
    case kcert::NodeKind::mul:
        return absolute_scale(*node.lhs, x) * absolute_scale(*node.rhs, x);
    default:
        return absolute_scale(*node.lhs, x) + absolute_scale(*node.rhs, x);
    }
}

}  // namespace

TEST_CASE("compile: (x+y)z keeps the two-instruction tape")
{
    const auto p = tape("(x+y)*z", 3, TapeStrategy::automatic);
    REQUIRE(p.instruction_count() == 2);
    CHECK(p.code()[0].op == OpCode::add);
    CHECK(p.code()[1].op == OpCode::mul);
    CHECK(tape("(x+y)*z", 3, TapeStrategy::structural) == p);
}

TEST_CASE("compile: Horner form of x^2 + x + 1")
{
    const auto p = tape("x^2 + x + 1", 1, TapeStrategy::horner);
    CHECK(p.count(OpCode::mul) == 1);
    CHECK(p.count(OpCode::add) == 2);
    CHECK(p.count(OpCode::sqr) == 0);
    CHECK(tape("x^2 + x + 1", 1, TapeStrategy::automatic) == p);
    const auto naive = tape("x*x + x + 1", 1, TapeStrategy::structural);
    CHECK(naive.instruction_count() == 3);
}

TEST_CASE("compile: Horner bound for dense univariate polynomials")
{
    for (int d = 1; d <= 12; ++d) {
        std::string text;
        for (int k = d; k >= 0; --k) {
            text += (k == d ? "" : " + ") + std::to_string(k + 2) + "*x^" + std::to_string(k);
        }
        const auto p = tape(text, 1, TapeStrategy::horner);
        CHECK(p.count(OpCode::mul) + p.count(OpCode::sqr) <= static_cast<std::size_t>(d));
        CHECK(p.count(OpCode::add) <= static_cast<std::size_t>(d));
        const auto a = tape(text, 1, TapeStrategy::automatic);
        CHECK(a.instruction_count() <= p.instruction_count());
    }
}

TEST_CASE("compile: constant system")
{
    const auto sys = kcert::compile(kcert::parse_system("variables: x\n5"));
    CHECK(sys.f.instruction_count() == 0);
    CHECK(sys.f.outputs()[0].kind == kcert::Operand::Kind::constant);
    CHECK(sys.jacobian.instruction_count() == 0);
    CHECK(sys.jacobian.is_structural_zero(0));
    const auto v = kcert::eval_point(sys.f, ComplexVector<double>{C{3, 0}});
    CHECK(v[0].re == 5.0);
}

TEST_CASE("program validation rejects forward references")
{
    using kcert::Instruction;
    using kcert::Operand;
    CHECK_THROWS_AS(kcert::SlpProgram(1, {}, {Instruction{OpCode::add, Operand::slot(0), Operand::input(0)}},
                                      {Operand::slot(0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(kcert::SlpProgram(1, {}, {}, {Operand::input(1)}), std::invalid_argument);
}

TEST_CASE("eval_point examples")
{
    CHECK(kcert::eval_point(tape("(x+y)*z", 3, TapeStrategy::automatic), ComplexVector<double>{C{1, 0}, C{1, 0}, C{2, 0}})[0] ==
          C{4, 0});
    CHECK(kcert::eval_point(tape("x^2 - 1", 1, TapeStrategy::automatic), ComplexVector<double>{C{1, 0}})[0] == C{0, 0});
    const auto r = kcert::eval_point(tape("x^2 - 2", 1, TapeStrategy::automatic), ComplexVector<double>{C{1.5, 0}})[0];
    CHECK(r.re == 0.25);
    CHECK(r.im == 0.0);
    CHECK_THROWS_AS(kcert::eval_point(tape("1/x", 1, TapeStrategy::automatic), ComplexVector<double>{C{0, 0}}),
                    kcert::EvaluationError);
}

TEST_CASE("eval_interval: the two tapes for (x+y)z give different enclosures")
{
    const auto left = tape("(x+y)*z", 3, TapeStrategy::structural);
    const auto right = tape("x*z + y*z", 3, TapeStrategy::structural);
    REQUIRE(left.instruction_count() == 2);
    REQUIRE(right.instruction_count() == 3);
    const IntervalBox<double> box{real_ci(-1, 0), real_ci(1, 1), real_ci(0, 1)};
    CHECK(kcert::eval_interval(left, box)[0] == real_ci(0, 1));
    CHECK(kcert::eval_interval(right, box)[0] == real_ci(-1, 1));

    oracle::Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const ComplexVector<double> x{C{rng.dyadic(4), rng.dyadic(4)}, C{rng.dyadic(4), rng.dyadic(4)},
                                      C{rng.dyadic(4), rng.dyadic(4)}};
        CHECK(kcert::eval_point(left, x) == kcert::eval_point(right, x));
    }
}

TEST_CASE("eval_interval on a point box contains the exact value")
{
    const auto p = tape("x^3 - x/3 + 1/7", 1, TapeStrategy::automatic);
    const auto node = kcert::parse_expression("x^3 - x/3 + 1/7", {"x"});
    const double x = 0.1;
    const auto image = kcert::eval_interval(p, IntervalBox<double>{CI::point(C{x, 0})});
    CHECK(oracle::contains(image[0], oracle::eval_exact(*node, {{oracle::exact(x), 0}})));
    CHECK(image[0].re().lo() < image[0].re().hi());
}

TEST_CASE("rational systems surface enclosure failures")
{
    const auto p = tape("1/(x - 1)", 1, TapeStrategy::automatic);
    CHECK_THROWS_AS(kcert::eval_interval(p, IntervalBox<double>{real_ci(0, 2)}), kcert::EnclosureError);
    const auto ok = kcert::eval_interval(p, IntervalBox<double>{real_ci(2, 3)});
    CHECK(oracle::contains(ok[0].re(), mpq_class(1, 2)));
    CHECK(oracle::contains(ok[0].re(), mpq_class(1)));
}

TEST_CASE("certify_positive_evaluation")
{
    const auto pos = kcert::compile(kcert::parse_system("variables: x\nx^2 + 1"));
    CHECK(kcert::certify_positive_evaluation(pos, {RI(-1, 1)}));
    CHECK(kcert::eval_interval(pos.f, IntervalBox<double>{real_ci(-1, 1)})[0] == real_ci(1, 2));

    const auto ident = kcert::compile(kcert::parse_system("variables: x\nx"));
    CHECK_FALSE(kcert::certify_positive_evaluation(ident, {RI(-1, 1)}));
    const auto neg = kcert::compile(kcert::parse_system("variables: x\nx - 10"));
    CHECK_FALSE(kcert::certify_positive_evaluation(neg, {RI(0, 1)}));
    const auto cplx = kcert::compile(kcert::parse_system("variables: x\nx^2 + 1 + i"));
    CHECK_FALSE(kcert::certify_positive_evaluation(cplx, {RI(-1, 1)}));
}

TEST_CASE("property: enclosure soundness on random polynomials")
{
    oracle::Rng rng(11);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
        const auto node = oracle::random_polynomial(rng, n, 4);
        const auto strategy = static_cast<TapeStrategy>(rng.integer(0, 3));
        const auto p = kcert::compile_expressions({node}, n, CompileOptions{strategy});
        IntervalBox<double> box;
        for (std::size_t j = 0; j < n; ++j) {
            box.push_back(rng.cinterval(-1.5, 1.5));
        }
        const auto image = kcert::eval_interval(p, box)[0];
        for (int s = 0; s < 4; ++s) {
            std::vector<oracle::QComplex> x;
            for (std::size_t j = 0; j < n; ++j) {
                x.push_back(oracle::exact(rng.sample(box[j])));
            }
            REQUIRE(oracle::contains(image, oracle::eval_exact(*node, x)));
            ++checked;
        }
    }
    CHECK(checked == 2000);
}

TEST_CASE("property: Horner and expanded tapes agree")
{
    oracle::Rng rng(12);
    const double u = std::ldexp(1.0, -53);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
        const auto node = oracle::random_polynomial(rng, n, 4);
        const auto expanded = kcert::compile_expressions({node}, n, CompileOptions{TapeStrategy::expanded});
        const auto horner = kcert::compile_expressions({node}, n, CompileOptions{TapeStrategy::horner});
        ComplexVector<double> x;
        std::vector<oracle::QComplex> xq;
        for (std::size_t j = 0; j < n; ++j) {
            x.push_back(C{rng.uniform(-1, 1), rng.uniform(-1, 1)});
            xq.push_back(oracle::exact(x.back()));
        }
        const C a = kcert::eval_point(expanded, x)[0];
        const C b = kcert::eval_point(horner, x)[0];
        const double length = static_cast<double>(std::max(expanded.instruction_count(), horner.instruction_count()) + 1);
        const double scale = std::max(1.0, absolute_scale(*node, x));
        REQUIRE(std::hypot(a.re - b.re, a.im - b.im) <= 10.0 * length * u * scale);

        const auto truth = oracle::eval_exact(*node, xq);
        REQUIRE(oracle::contains(kcert::eval_interval(expanded, kcert::to_box(x))[0], truth));
        REQUIRE(oracle::contains(kcert::eval_interval(horner, kcert::to_box(x))[0], truth));
    }
}

TEST_CASE("property: Jacobian tape matches finite differences and exact derivatives")
{
    oracle::Rng rng(13);
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
        std::vector<kcert::NodePtr> exprs;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < n; ++k) {
            exprs.push_back(oracle::random_polynomial(rng, n, 3));
            names.push_back("x" + std::to_string(k));
        }
        const auto sys = kcert::compile(kcert::make_system(names, exprs),
                                        CompileOptions{static_cast<TapeStrategy>(rng.integer(0, 3))});
        ComplexVector<double> x;
        std::vector<oracle::QComplex> xq;
        for (std::size_t j = 0; j < n; ++j) {
            x.push_back(C{rng.uniform(-1, 1), rng.uniform(-1, 1)});
            xq.push_back(oracle::exact(x.back()));
        }
        const auto jac = kcert::jacobian_point(sys, x);
        const auto jac_box = kcert::jacobian_interval(sys, kcert::to_box(x));
        const double h = 1e-6;
        for (std::size_t j = 0; j < n; ++j) {
            auto xp = x;
            auto xm = x;
            xp[j].re += h;
            xm[j].re -= h;
            const auto fp = kcert::eval_point(sys.f, xp);
            const auto fm = kcert::eval_point(sys.f, xm);
            for (std::size_t i = 0; i < n; ++i) {
                const C fd{(fp[i].re - fm[i].re) / (2 * h), (fp[i].im - fm[i].im) / (2 * h)};
                const C& d = jac(i, j);
                const double err = std::hypot(fd.re - d.re, fd.im - d.im);
                REQUIRE(err < 1e-6 * std::max(1.0, std::hypot(d.re, d.im)));
                const auto exact = exact_with_derivative(*exprs[i], xq, j).second;
                REQUIRE(oracle::contains(jac_box(i, j), exact));
                ++compared;
            }
        }
    }
    CHECK(compared >= 500);
}

TEST_CASE("Jacobian of a rational function")
{
    const auto sys = kcert::compile(kcert::parse_system("variables: x, y\nx/y\nx*y - 1"));
    const auto j = kcert::jacobian_point(sys, ComplexVector<double>{C{2, 0}, C{4, 0}});
    CHECK(j(0, 0) == C{0.25, 0});
    CHECK(j(0, 1) == C{-0.125, 0});
    CHECK(j(1, 0) == C{4, 0});
    CHECK(j(1, 1) == C{2, 0});
}

TEST_CASE("multiprecision evaluation encloses the exact value")
{
    const auto p = tape("x^2 - 2", 1, TapeStrategy::automatic);
    const kcert::BigFloat x(1.41421356, 256);
    using BI = kcert::RealInterval<kcert::BigFloat>;
    using BCI = kcert::ComplexInterval<kcert::BigFloat>;
    const kcert::IntervalBox<kcert::BigFloat> box{BCI(BI::point(x), BI::point(kcert::BigFloat(256)))};
    const auto image = kcert::eval_interval(p, box);
    const mpq_class xq = oracle::exact(x);
    CHECK(oracle::contains(image[0].re(), xq * xq - 2));
    CHECK(image[0].re().lo().precision() == 256);
}

TEST_CASE("interval evaluation is reproducible")
{
    const auto sys = kcert::compile(kcert::load_system(KCERT_DATA_DIR "/bacillus_subtilis.sys"));
    IntervalBox<double> box;
    oracle::Rng rng(4);
    for (int k = 0; k < 10; ++k) {
        box.push_back(rng.cinterval(0, 3));
    }
    CHECK(kcert::eval_interval(sys.f, box) == kcert::eval_interval(sys.f, box));
    CHECK(kcert::eval_interval(sys.jacobian, box) == kcert::eval_interval(sys.jacobian, box));
}
