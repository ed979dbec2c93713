#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kcert/expr.hpp"
#include "oracle.hpp"

using kcert::CoefficientKind;
using kcert::NodeKind;
using kcert::ParseError;
using kcert::parse_system;

TEST_CASE("univariate real system")
{
    const auto sys = parse_system("variables: x\nx^2 - 1");
    CHECK(sys.size() == 1);
    CHECK(sys.coefficient_kind == CoefficientKind::real);
    const auto v = oracle::eval_exact(*sys.expressions[0], {{3, 0}});
    CHECK(v.re == 8);
    CHECK(v.im == 0);
}

TEST_CASE("non-square systems are rejected")
{
    CHECK_THROWS_AS(parse_system("variables: x, y, z\n(x+y)*z"), ParseError);
    try {
        parse_system("variables: x, y, z\n(x+y)*z");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("non-square") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line and column")
{
    try {
        parse_system("# header\nvariables: x\nx + * 2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 5);
    }
    try {
        parse_system("variables: x\n  x + y");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 7);
        CHECK(std::string(e.what()).find("undeclared identifier 'y'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_system("x^2"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x\n(x + 1"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x\nx^y"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x\nx^1.5"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x\nx/0"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x, x\nx\nx"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: i\ni"), ParseError);
}

TEST_CASE("literals, parameters and the imaginary unit")
{
    const auto sys = parse_system("variables: x\nparam a = 0.7\nparam b = 2/3\n a*x + b - 1.5e-3");
    const auto v = oracle::eval_exact(*sys.expressions[0], {{1, 0}});
    CHECK(v.re == mpq_class(7, 10) + mpq_class(2, 3) - mpq_class(3, 2000));

    const auto cplx = parse_system("variables: x\nx^2 - 2*i");
    CHECK(cplx.coefficient_kind == CoefficientKind::complex);

    // i*i folds to the real constant -1
    const auto folded = parse_system("variables: x\nx + i*i");
    CHECK(folded.coefficient_kind == CoefficientKind::real);

    CHECK_THROWS_AS(parse_system("variables: x\nparam x = 2\nx"), ParseError);
    CHECK_THROWS_AS(parse_system("variables: x\nparam a = x\nx"), ParseError);
}

TEST_CASE("precedence: unary minus binds looser than power")
{
    const auto sys = parse_system("variables: x\n-x^2 + 2^-1");
    const auto v = oracle::eval_exact(*sys.expressions[0], {{3, 0}});
    CHECK(v.re == mpq_class(-17, 2));
    const auto chain = parse_system("variables: x\n2*x/4*3");
    CHECK(oracle::eval_exact(*chain.expressions[0], {{2, 0}}).re == 3);
}

TEST_CASE("Bacillus subtilis steady-state system")
{
    const auto sys = kcert::load_system(KCERT_DATA_DIR "/bacillus_subtilis.sys");
    CHECK(sys.size() == 10);
    CHECK(sys.coefficient_kind == CoefficientKind::real);
    CHECK(sys.variables[6] == "sigmaB");
    // last equation: phos + vPp - ptot
    std::vector<oracle::QComplex> x(10, oracle::QComplex{0, 0});
    x[9] = {1, 0};
    x[8] = {1, 0};
    CHECK(oracle::eval_exact(*sys.expressions[9], x).re == 0);
    // at the printed steady state every residual is small relative to the term sizes
    const double printed[10] = {0.10633375735, 0.303554095, 2.25701026,   0.0557971948, 8.288216246,
                                27.0899869,    0.240800757, 10.42034597, 1.99593338916, 0.00406661084};
    for (int k = 0; k < 10; ++k) {
        x[k] = {oracle::exact(printed[k]), 0};
    }
    for (const auto& e : sys.expressions) {
        const auto r = oracle::eval_exact(*e, x);
        CHECK(std::abs(r.re.get_d()) < 1e-5);
    }
}
