#include "jagerlab/scalar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace jagerlab;

TEST(SnapFloor, ExactIntegerIsItsOwnFloor) {
  EXPECT_EQ(snap_floor(1.0, TolerancePolicy{}), 1);
  EXPECT_EQ(snap_floor(0.0, TolerancePolicy{}), 0);
}

TEST(SnapFloor, SnapsUpWithinTolerance) {
  EXPECT_EQ(snap_floor(2.9999999999999, TolerancePolicy{}), 3);
  EXPECT_EQ(snap_floor(2.999999, TolerancePolicy{}), 2);
}

TEST(SnapFloor, HandComputedDigit) {
  // 0.5/0.3 - 0.5 = 1.1666...
  EXPECT_EQ(snap_floor(1.1666666, TolerancePolicy{}), 1);
  EXPECT_EQ(snap_floor(0.5 / 0.3 - 0.5, TolerancePolicy{}), 1);
}

TEST(SnapFloor, NegativeBeyondToleranceThrows) {
  EXPECT_THROW(snap_floor(-1e-6, TolerancePolicy{}), DomainError);
  EXPECT_EQ(snap_floor(-1e-14, TolerancePolicy{}), 0);
}

TEST(SnapFloor, RationalModeIsExact) {
  const TolerancePolicy tol{};
  EXPECT_EQ(snap_floor(Rational(7, 2), tol), 3);
  // 1 - 1e-15 would snap in floating modes, never in rationals.
  EXPECT_EQ(snap_floor(Rational(999999999999999, 1000000000000000), tol), 0);
  EXPECT_THROW(snap_floor(Rational(-1, 10), tol), DomainError);
}

TEST(SnapFloor, ExtendedPrecision) {
  const TolerancePolicy tol{};
  EXPECT_EQ(snap_floor(Extended<128>(5) / 2, tol), 2);
  EXPECT_EQ(snap_floor(Extended<128>(3) - Extended<128>("1e-20"), tol), 3);
}

TEST(SnapFloorProperty, FloorOrFloorPlusOneOnlyNearInteger) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  const TolerancePolicy tol{};
  for (int i = 0; i < 20000; ++i) {
    double t = dist(rng);
    if (i % 4 == 0) t = std::round(t) - std::ldexp(1.0, -40 - (i % 13));  // near-integer probes
    if (t < 0) continue;
    const auto f = static_cast<std::int64_t>(std::floor(t));
    const auto s = snap_floor(t, tol);
    ASSERT_TRUE(s == f || s == f + 1) << t;
    if (s == f + 1) {
      ASSERT_LE(double(f + 1) - t, tol.eps_snap * std::max(1.0, std::fabs(t))) << t;
    }
  }
}

TEST(Tolerance, DefaultsPerMode) {
  const auto hw = TolerancePolicy::defaults(Precision::hardware);
  EXPECT_DOUBLE_EQ(hw.eps_compare, 1e-9);
  EXPECT_DOUBLE_EQ(hw.eps_snap, 1e-12);
  EXPECT_DOUBLE_EQ(hw.eps_boundary, 1e-9);
  EXPECT_DOUBLE_EQ(TolerancePolicy::defaults(Precision::extended).eps_compare, 1e-25);
}

TEST(Tolerance, ValidateRejectsNegativeAndNonFinite) {
  TolerancePolicy tol;
  EXPECT_NO_THROW(tol.validate());
  tol.eps_boundary = 0.0;
  EXPECT_NO_THROW(tol.validate());
  tol.eps_snap = -1e-12;
  EXPECT_THROW(tol.validate(), std::invalid_argument);
  tol.eps_snap = std::nan("");
  EXPECT_THROW(tol.validate(), std::invalid_argument);
}

TEST(Traits, MantissaBits) {
  EXPECT_EQ(ScalarTraits<double>::mantissa_bits, 53u);
  EXPECT_EQ(ScalarTraits<Extended<256>>::mantissa_bits, 256u);
  EXPECT_TRUE(is_exact_v<Rational>);
  EXPECT_FALSE(is_exact_v<Extended<128>>);
  EXPECT_GE(std::numeric_limits<Extended<128>>::digits, 128);
}

TEST(RealInputParse, DecimalsAreExact) {
  const auto r = RealInput::parse("0.3");
  EXPECT_EQ(r.exact(), Rational(3, 10));
  EXPECT_FALSE(r.rational_syntax());
  EXPECT_EQ(RealInput::parse("0.09").exact(), Rational(9, 100));
  EXPECT_EQ(RealInput::parse("-1.25").exact(), Rational(-5, 4));
  EXPECT_EQ(RealInput::parse(".5").exact(), Rational(1, 2));
  EXPECT_EQ(RealInput::parse("2.").exact(), Rational(2));
}

TEST(RealInputParse, LeadingZerosAreDecimal) {
  EXPECT_EQ(RealInput::parse("007").exact(), Rational(7));
  EXPECT_EQ(RealInput::parse("010/08").exact(), Rational(5, 4));
}

TEST(RealInputParse, Exponents) {
  EXPECT_EQ(RealInput::parse("1e-2").exact(), Rational(1, 100));
  EXPECT_EQ(RealInput::parse("2.5E+1").exact(), Rational(25));
  EXPECT_FALSE(RealInput::parse("1e2").rational_syntax());
}

TEST(RealInputParse, RationalSyntax) {
  const auto r = RealInput::parse(" 2/3 ");
  EXPECT_EQ(r.exact(), Rational(2, 3));
  EXPECT_TRUE(r.rational_syntax());
  EXPECT_TRUE(RealInput::parse("5").rational_syntax());
  EXPECT_EQ(RealInput::parse("-4/6").exact(), Rational(-2, 3));
}

TEST(RealInputParse, Malformed) {
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "1/", "/2", "1e", "0x10", "1/2/3", "--1", "."}) {
    EXPECT_THROW(RealInput::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(RealInputConvert, MaterializesAtEachPrecision) {
  const auto third = RealInput::parse("1/3");
  EXPECT_DOUBLE_EQ(third.as<double>(), 1.0 / 3.0);
  const Extended<256> x = third.as<Extended<256>>();
  EXPECT_LT(bmp::abs(x * 3 - 1), Extended<256>("1e-75"));
  EXPECT_EQ(third.as<Rational>(), Rational(1, 3));
}

TEST(RealInputConvert, FromDoubleIsExact) {
  const auto r = RealInput::from_double(0.1);
  EXPECT_NE(r.exact(), Rational(1, 10));
  EXPECT_EQ(r.to_double(), 0.1);
  EXPECT_THROW(RealInput::from_double(std::nan("")), std::invalid_argument);
}

TEST(Log2Abs, AgreesAcrossTypes) {
  EXPECT_NEAR(log2_abs(1024.0), 10.0, 1e-12);
  EXPECT_NEAR(log2_abs(Rational(1, 1024)), -10.0, 1e-12);
  EXPECT_NEAR(log2_abs(Extended<128>(3)), std::log2(3.0), 1e-12);
  const Rational huge = Rational(BigInt(1) << 300, 3);
  EXPECT_NEAR(log2_abs(huge), 300.0 - std::log2(3.0), 1e-9);
}
