#include <cstdint>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include <fsbasis/rational.hpp>

using fsbasis::rational;

TEST(Rational, NormalizesSignAndGcd)
{
    const rational q{6, -4};
    EXPECT_EQ(q.num(), -3);
    EXPECT_EQ(q.den(), 2);
    EXPECT_EQ(rational(0, -7).den(), 1);
}

TEST(Rational, Arithmetic)
{
    EXPECT_EQ(rational(1, 2) + rational(1, 3), rational(5, 6));
    EXPECT_EQ(rational(1, 2) - rational(1, 2), rational(0));
    EXPECT_EQ(rational(2, 3) * rational(3, 4), rational(1, 2));
    EXPECT_EQ(rational(2, 3) / rational(-4, 9), rational(-3, 2));
    EXPECT_LT(rational(-1, 2), rational(1, 3));
}

TEST(Rational, TextRoundTrip)
{
    for (const rational q : {rational(0), rational(-7), rational(5, 12), rational(-1, 2)}) {
        EXPECT_EQ(rational::parse(q.str()), q);
    }
    EXPECT_EQ(rational(-1, 2).str(), "-1/2");
    EXPECT_THROW(rational::parse("x/2"), std::invalid_argument);
}

TEST(Rational, ErrorsInsteadOfWrapping)
{
    const rational big{std::numeric_limits<std::int64_t>::max()};
    EXPECT_THROW(big + rational(1), std::overflow_error);
    EXPECT_THROW(big * rational(2), std::overflow_error);
    EXPECT_THROW(rational(1, 0), std::domain_error);
    EXPECT_THROW(rational(1) / rational(0), std::domain_error);
}
