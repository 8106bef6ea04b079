#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ncf/specfun.hpp"
#include "oracles.hpp"

using namespace ncf::specfun;
using oracle::rel_diff;

namespace {
constexpr double g = special_constants.euler_gamma;
constexpr double z3 = special_constants.zeta3;
} // namespace

TEST(SpecialConstants, MatchReferenceValues)
{
    EXPECT_NEAR(g, 0.57721566490153286, 1e-15);
    EXPECT_LT(rel_diff(z3, oracle::hurwitz_zeta(3, 1.0)), 1e-12);
    EXPECT_LT(rel_diff(special_constants.zeta5, oracle::hurwitz_zeta(5, 1.0)), 1e-12);
}

TEST(Digamma, ClassicalValues)
{
    EXPECT_LT(rel_diff(digamma(1.0), -g), 1e-14);
    EXPECT_LT(rel_diff(digamma(0.5), -g - 2.0 * std::numbers::ln2), 1e-14);
}

TEST(Digamma, MatchesSeriesOracle)
{
    for (double x : {0.05, 0.3, 0.77, 2.5, 3.7, 9.99, 10.0, 25.0})
    {
        EXPECT_LT(rel_diff(digamma(x), oracle::digamma(x)), 1e-12) << "x = " << x;
    }
}

TEST(Digamma, RecurrenceOnLogGrid)
{
    for (double lx = std::log(0.05); lx <= std::log(50.0); lx += 0.05)
    {
        const double x = std::exp(lx);
        EXPECT_LT(rel_diff(digamma(x + 1.0) - digamma(x), 1.0 / x), 1e-12) << "x = " << x;
    }
}

TEST(Digamma, DerivativeIsTrigamma)
{
    const double h = 1e-5;
    for (double x : {0.5, 1.0, 2.0, 5.0})
    {
        const double fd = (digamma(x + h) - digamma(x - h)) / (2 * h);
        EXPECT_LT(rel_diff(fd, trigamma(x)), 1e-6) << "x = " << x;
    }
}

TEST(Digamma, RejectsNonPositiveAndNonFinite)
{
    EXPECT_THROW(digamma(0.0), ncf::DomainError);
    EXPECT_THROW(digamma(-1.5), ncf::DomainError);
    EXPECT_THROW(digamma(std::nan("")), ncf::DomainError);
    EXPECT_THROW(digamma(INFINITY), ncf::DomainError);
}

TEST(Polygamma, ClassicalValues)
{
    EXPECT_LT(rel_diff(polygamma(2, 0.5), -14.0 * z3), 1e-12);
    EXPECT_LT(rel_diff(polygamma(1, 1.0), std::numbers::pi * std::numbers::pi / 6.0), 1e-13);
}

TEST(Polygamma, MatchesSeriesOracle)
{
    for (double x : {0.05, 0.3, 0.5, 1.7, 9.5, 12.0})
    {
        EXPECT_LT(rel_diff(polygamma(1, x), oracle::polygamma(1, x)), 1e-12) << "x = " << x;
        EXPECT_LT(rel_diff(polygamma(2, x), oracle::polygamma(2, x)), 1e-12) << "x = " << x;
    }
}

TEST(Polygamma, RejectsUnsupportedOrderAndDomain)
{
    EXPECT_THROW(polygamma(0, 1.0), ncf::DomainError);
    EXPECT_THROW(polygamma(3, 1.0), ncf::DomainError);
    EXPECT_THROW(polygamma(1, 0.0), ncf::DomainError);
    EXPECT_THROW(polygamma(2, -0.5), ncf::DomainError);
}

TEST(HurwitzZeta, ZetaThreeAtOne)
{
    EXPECT_LT(rel_diff(hurwitz_zeta(3, 1.0), 1.2020569031595943), 1e-15);
}

TEST(HurwitzZeta, DefiningRecurrence)
{
    const double x = 0.7;
    EXPECT_LT(rel_diff(hurwitz_zeta(3, x) - hurwitz_zeta(3, x + 1.0), std::pow(x, -3)), 1e-13);
}

TEST(HurwitzZeta, HalfIntegerIdentity)
{
    EXPECT_LT(rel_diff(hurwitz_zeta(3, 0.5), 7.0 * z3), 1e-13);
}

TEST(HurwitzZeta, EqualsMinusHalfSecondPolygamma)
{
    for (int i = 1; i <= 19; ++i)
    {
        const double x = 0.05 * i;
        EXPECT_LT(rel_diff(hurwitz_zeta(3, x), -0.5 * polygamma(2, x)), 1e-12) << "x = " << x;
    }
}

TEST(HurwitzZeta, HigherOrdersMatchOracle)
{
    for (int s : {2, 4, 5, 8, 20})
    {
        for (double x : {0.1, 1.0, 3.3})
        {
            EXPECT_LT(rel_diff(hurwitz_zeta(s, x), oracle::hurwitz_zeta(s, x, 100000)), 1e-12)
                << "s = " << s << ", x = " << x;
        }
    }
}

TEST(HurwitzZeta, RejectsBadArguments)
{
    EXPECT_THROW(hurwitz_zeta(1, 1.0), ncf::DomainError);
    EXPECT_THROW(hurwitz_zeta(3, 0.0), ncf::DomainError);
}

TEST(SpecialFunctions, FiniteOverWideRange)
{
    for (double x = 1e-6; x < 1e8; x *= 3.7)
    {
        EXPECT_TRUE(std::isfinite(digamma(x)));
        EXPECT_TRUE(std::isfinite(polygamma(1, x)));
        EXPECT_TRUE(std::isfinite(polygamma(2, x)));
        EXPECT_TRUE(std::isfinite(hurwitz_zeta(3, x)));
    }
}

TEST(SpecialFunctions, LongDoubleInstantiation)
{
    EXPECT_NEAR(static_cast<double>(digamma(1.0L)), -g, 1e-15);
}
