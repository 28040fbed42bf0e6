#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "uavg/ft_region.hpp"

using namespace uavg;

namespace {

ThresholdCurve shipped() { return ThresholdCurve::load(UAVG_DATA_DIR "/synthetic_threshold.csv"); }

ThresholdCurve rectangular(double gamma) { return {"rect", {{1e-4, gamma}, {1e-2, gamma}}}; }

std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return v;
}

ThresholdCurve parse(const std::string& text) {
    std::istringstream in(text);
    return ThresholdCurve::parse_csv(in);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const CurveFormatError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Curve, ShippedCurveLoads) {
    const auto c = shipped();
    EXPECT_EQ(c.code, "synthetic-example");
    EXPECT_GE(c.points.size(), 2u);
    EXPECT_NO_THROW(c.validate());
}

TEST(Curve, ParseAndRoundTrip) {
    const auto c = parse("# code: demo\nepsilon,gamma\n0.001,0.02\n0.01,0.001\n");
    EXPECT_EQ(c.code, "demo");
    ASSERT_EQ(c.points.size(), 2u);
    EXPECT_EQ(c.points[1].gamma, 0.001);
    const auto again = parse(c.to_csv());
    EXPECT_EQ(again.code, c.code);
    EXPECT_EQ(again.points[0].epsilon, c.points[0].epsilon);
}

TEST(Curve, ParseErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("eps,gam\n0.1,0.1\n"), 1);
    EXPECT_EQ(error_line("epsilon,gamma\n0.001,0.02\n0.01,abc\n"), 3);
    EXPECT_EQ(error_line("# code: x\nepsilon,gamma\n0.001\n0.01,0.001\n"), 3);
    EXPECT_EQ(error_line("epsilon,gamma\n0.01,0.02\n0.001,0.001\n"), 3);  // epsilon not increasing
    EXPECT_EQ(error_line("epsilon,gamma\n0.001,0.001\n0.01,0.02\n"), 3);  // gamma increasing
    EXPECT_EQ(error_line("epsilon,gamma\n0.001,1.5\n0.01,0.02\n"), 2);
    EXPECT_NE(error_line("epsilon,gamma\n0.001,0.01\n"), -1);  // one point only
    EXPECT_THROW(ThresholdCurve::load("/nonexistent/curve.csv"), std::runtime_error);
}

TEST(Curve, InterpolationIsLogLog) {
    const ThresholdCurve c{"x", {{1e-4, 1e-2}, {1e-2, 1e-4}}};
    EXPECT_NEAR(*c.gamma_at(1e-3), 1e-3, 1e-15);
    EXPECT_FALSE(c.gamma_at(2e-2).has_value());
    EXPECT_EQ(*c.gamma_at(1e-6), 1e-2);
}

TEST(Region, SingleCopyEqualsRawMembership) {
    const auto c = shipped();
    for (double e : logspace(1e-6, 0.05, 40))
        for (double g : logspace(1e-6, 0.05, 40)) EXPECT_EQ(is_fault_tolerant({e, g, 1}, c), c.contains(e, g));
}

TEST(Region, RectangularExample) {
    const auto c = rectangular(0.01);
    EXPECT_TRUE(is_fault_tolerant({5e-3, 9e-3, 1}, c));
    EXPECT_FALSE(is_fault_tolerant({5e-3, 9e-3, 2}, c));  // loss grows to 0.0175
    EXPECT_TRUE(is_fault_tolerant({5e-3, 9e-3, 1}, densify(c)));
    EXPECT_FALSE(is_fault_tolerant({5e-3, 9e-3, 2}, densify(c)));
}

TEST(Region, LossFreeAchievableSetGrowsWithCopies) {
    const auto c = shipped();
    for (double e : logspace(1e-5, 0.2, 80)) {
        bool before = false;
        for (int n = 1; n <= 1024; n *= 2) {
            const bool now = is_fault_tolerant({e, 0.0, n}, c);
            if (before) EXPECT_TRUE(now) << "epsilon " << e << " N " << n;
            before = now;
        }
    }
}

TEST(Region, DensificationDoesNotChangeVerdicts) {
    const auto c = shipped();
    const auto d = densify(densify(c));
    EXPECT_EQ(d.points.size(), 4 * (c.points.size() - 1) + 1);
    for (double e : logspace(1e-6, 0.05, 30))
        for (double g : logspace(1e-6, 0.05, 30))
            for (int n : {1, 2, 4, 16}) EXPECT_EQ(is_fault_tolerant({e, g, n}, c), is_fault_tolerant({e, g, n}, d));
}

TEST(Region, LossOnlyFailureIsPermanentOnFlatCurve) {
    const auto c = rectangular(0.01);
    for (double e : logspace(1e-5, 0.01, 25)) {
        for (double g : logspace(1e-5, 0.05, 25)) {
            bool failed_on_loss = false;
            for (int n = 1; n <= 256; n *= 2) {
                const auto r = effective_rates(e, g, n);
                const auto bound = c.gamma_at(r.effective_error);
                if (failed_on_loss) EXPECT_FALSE(is_fault_tolerant({e, g, n}, c));
                if (bound && r.effective_loss > *bound) failed_on_loss = true;
            }
        }
    }
}

// On a sloped boundary the tolerated loss rises as E falls, and can outrun Gamma.
TEST(Region, LossOnlyFailureCanRecoverOnSlopedCurve) {
    const auto c = shipped();
    for (int n : {1, 2, 4}) {
        const auto r = effective_rates(0.008, 0.004, n);
        ASSERT_TRUE(c.gamma_at(r.effective_error).has_value());
        EXPECT_FALSE(is_fault_tolerant({0.008, 0.004, n}, c)) << n;
    }
    EXPECT_TRUE(is_fault_tolerant({0.008, 0.004, 8}, c));
}

TEST(Region, BestN) {
    const auto c = rectangular(0.01);
    EXPECT_EQ(best_n(1e-3, 1e-3, {1, 2, 4}, c), 1);
    const auto wide = rectangular(0.5);
    const auto n = best_n(0.02, 1e-3, {16, 1, 2, 4, 8}, wide);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(*n, 4);
    EXPECT_FALSE(best_n(1e-3, 0.01, {2, 4, 8, 16}, c).has_value());
}

TEST(Region, SweepSchema) {
    const auto t = sweep_region({1e-3, 0.5}, {1e-3}, {1, 2}, shipped());
    EXPECT_EQ(t.columns(), (std::vector<std::string>{"epsilon", "gamma", "N", "effective_error", "effective_loss",
                                                     "fault_tolerant"}));
    EXPECT_EQ(t.size(), 4u);
    const auto far = sweep_region({0.5}, {0.5, 0.9}, {1, 2, 4}, shipped());
    for (const auto& row : far.rows()) EXPECT_FALSE(std::get<bool>(row[5]));
}
