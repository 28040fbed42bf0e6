#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "uavg/parity.hpp"

using namespace uavg;
using Rational = boost::multiprecision::cpp_rational;

namespace {

HeraldPattern pattern(const ParityCode& code, std::initializer_list<int> heralded) {
    auto p = HeraldPattern::clear(code);
    for (int i : heralded) p.flags[static_cast<std::size_t>(i)] = true;
    return p;
}

std::vector<RailAmplitudes> rails(int m, SampleStream& rng) {
    std::vector<RailAmplitudes> r;
    for (int i = 0; i < m; ++i) r.push_back(random_rail_amplitudes(rng));
    return r;
}

}  // namespace

TEST(Criteria, Examples) {
    const ParityCode code{2, 3};
    EXPECT_TRUE(success_criteria(HeraldPattern::clear(code), code));
    EXPECT_FALSE(success_criteria(pattern(code, {0, 2, 4}), code));  // every copy heralded
    EXPECT_FALSE(success_criteria(pattern(code, {2, 3}), code));     // copy 1 lost entirely
    EXPECT_TRUE(success_criteria(pattern(code, {1}), code));
    EXPECT_TRUE(success_criteria(pattern(code, {0, 5}), code));
    EXPECT_THROW(success_criteria(HeraldPattern{{true}}, code), std::invalid_argument);
}

TEST(Criteria, PatternHelpers) {
    const ParityCode code{3, 2};
    const auto p = HeraldPattern::from_mask(code, 0b100010);
    EXPECT_EQ(p.flags.size(), 6u);
    EXPECT_EQ(p.heralds_in_copy(code, 0) + p.heralds_in_copy(code, 1), 2);
    EXPECT_EQ(p.errored_copies(code).size(), 2u);
}

TEST(SuccessProbability, SpotValuesAndLimits) {
    EXPECT_NEAR(logical_success_prob({2, 2}, {0.1}), 0.9477, 1e-12);
    for (int n = 1; n <= 4; ++n) {
        for (int q = 1; q <= 4; ++q) {
            EXPECT_EQ(logical_success_prob({n, q}, {0.0}), 1.0);
            EXPECT_EQ(logical_success_prob({n, q}, {1.0}), 0.0);
        }
    }
    EXPECT_THROW(logical_success_prob({2, 2}, {1.5}), std::invalid_argument);
    EXPECT_THROW(ParityCode({0, 2}).validate(), std::invalid_argument);
}

TEST(SuccessProbability, ClosedFormEqualsEnumerationExactly) {
    const Rational ps[] = {Rational(1, 20), Rational(1, 10), Rational(3, 10)};
    for (int n = 1; n <= 4; ++n) {
        for (int q = 1; q <= 4; ++q) {
            for (const auto& p : ps) {
                EXPECT_EQ(logical_success_closed<Rational>(n, q, p), logical_success_enumerated<Rational>({n, q}, p))
                    << "n=" << n << " q=" << q << " p=" << p;
            }
        }
    }
}

TEST(SuccessProbability, NonIncreasingInLoss) {
    for (int n = 1; n <= 5; ++n) {
        for (int q = 1; q <= 5; ++q) {
            double prev = 1.0;
            for (int i = 0; i <= 100; ++i) {
                const double cur = logical_success_prob({n, q}, {i / 100.0});
                EXPECT_LE(cur, prev + 1e-15);
                prev = cur;
            }
        }
    }
}

// Adding a copy helps only while a fully lost copy stays unlikely: the step
// is (1 - s) s^q - p^n (1 - p^n)^q, which turns negative for large q or p.
TEST(SuccessProbability, CopyIncrement) {
    using Rational = boost::multiprecision::cpp_rational;
    for (int n = 1; n <= 4; ++n) {
        for (int q = 1; q <= 6; ++q) {
            for (const Rational& p : {Rational(1, 100), Rational(1, 10), Rational(1, 2)}) {
                Rational c = 1, pn = 1;
                for (int i = 0; i < n; ++i) c *= 1 - p, pn *= p;
                const Rational s = 1 - c - pn;
                Rational sq = 1, kq = 1;
                for (int i = 0; i < q; ++i) sq *= s, kq *= 1 - pn;
                EXPECT_EQ(logical_success_closed<Rational>(n, q + 1, p) - logical_success_closed<Rational>(n, q, p),
                          (1 - s) * sq - pn * kq);
            }
        }
    }
    EXPECT_GT(logical_success_prob({2, 2}, {0.01}), logical_success_prob({2, 1}, {0.01}));
    EXPECT_LT(logical_success_prob({2, 3}, {0.5}), logical_success_prob({2, 2}, {0.5}));
    EXPECT_LT(logical_success_prob({1, 2}, {0.1}), logical_success_prob({1, 1}, {0.1}));
}

TEST(HeraldProbability, FromAveraging) {
    EXPECT_EQ(herald_prob_from_ua(0.01, 1, 3), 0.0);
    EXPECT_NEAR(herald_prob_from_ua(0.01, std::numeric_limits<double>::infinity(), 3), 0.03, 1e-15);
    EXPECT_NEAR(herald_prob_from_ua(0.01, 4, 3), 0.0225, 1e-15);
}

TEST(Channel, Examples) {
    SampleStream rng(30, 0);
    const Eigen::Vector2cd psi = Eigen::Vector2cd(Complex(0.6, 0.1), Complex(0.2, -0.3)).normalized();
    const RailAmplitudes r = random_rail_amplitudes(rng);
    EXPECT_LE((ua_qubit_channel(false, Matrix2c::Identity(), r, psi) - psi).norm(), 1e-15);

    const RailAmplitudes equal{Complex(0.05, 0.02), Complex(0.05, 0.02)};
    const Eigen::Vector2cd out = ua_qubit_channel(true, Matrix2c::Identity(), equal, Eigen::Vector2cd(1, 1));
    EXPECT_NEAR(std::abs(out(0) + out(1)), 0.0, 1e-15);
}

TEST(Channel, BranchAmplitudes) {
    const RailAmplitudes a{Complex(0.3, 0.1), Complex(-0.2, 0.4)};
    const auto one = branch_amplitudes({a});
    EXPECT_NEAR(std::abs(one.delta_theta - a.dh), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(one.delta_phi + a.dv), 0.0, 1e-15);

    const RailAmplitudes pos{0.1, 0.1};
    EXPECT_EQ(branch_amplitudes({pos}).relative_sign, -1);
    SampleStream rng(31, 0);
    for (int j = 1; j <= 3; ++j) {
        for (int t = 0; t < 20; ++t) {
            const auto b = branch_amplitudes(rails(j, rng));
            EXPECT_TRUE(b.relative_sign == 1 || b.relative_sign == -1);
        }
    }
    EXPECT_THROW(branch_amplitudes({}), std::invalid_argument);
}

TEST(Verifier, NoHeraldReproducesEncodedGate) {
    SampleStream rng(32, 0);
    VerifyCase c;
    c.code = {3, 2};
    c.pattern = HeraldPattern::clear(c.code);
    c.u_target = single_qubit_matrix2(named_gate(GateName::H));
    c.logical = LogicalState::random(rng);
    c.rails = rails(6, rng);
    const auto r = statevector_verify(c);
    EXPECT_TRUE(r.passed) << r.message;
    EXPECT_EQ(r.remaining.size(), 6u);
    EXPECT_EQ(r.logical_sign, 1);
}

TEST(Verifier, AllOneCopyPatterns) {
    SampleStream rng(33, 0);
    const Matrix2c gates[] = {Matrix2c::Identity(), single_qubit_matrix2(named_gate(GateName::H)),
                              single_qubit_matrix2(named_gate(GateName::Z_alpha, 0.3))};
    int checked = 0;
    for (int n = 2; n <= 3; ++n) {
        const ParityCode code{n, 2};
        for (std::uint64_t mask = 1; mask < (1u << (2 * n)); ++mask) {
            const auto p = HeraldPattern::from_mask(code, mask);
            const int heralds = std::popcount(mask);
            if (heralds > 2 || p.errored_copies(code).size() != 1 || !success_criteria(p, code)) continue;
            for (const auto& u : gates) {
                for (int s = 0; s < 5; ++s) {
                    for (int outcome : {1, -1}) {
                        VerifyCase c{code, p, u, LogicalState::random(rng), {outcome}, rails(2 * n, rng)};
                        const auto r = statevector_verify(c);
                        ASSERT_TRUE(r.outcome_possible) << r.message;
                        EXPECT_TRUE(r.passed) << "n=" << n << " mask=" << mask << ": " << r.message;
                        EXPECT_EQ(r.logical_sign, outcome);
                        EXPECT_EQ(static_cast<int>(r.remaining.size()), 2 * n - heralds - 1);
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Verifier, MinusOutcomeFlipsLogicalOne) {
    // n = 2, q = 2, herald on qubit 0, u_T = I: qubit 1 is measured and the
    // clean copy carries alpha|0>_L - beta|1>_L.
    SampleStream rng(34, 0);
    const ParityCode code{2, 2};
    VerifyCase c{code, pattern(code, {0}), Matrix2c::Identity(), LogicalState::normalized(0.6, 0.8), {-1},
                 rails(4, rng)};
    const auto r = statevector_verify(c);
    ASSERT_TRUE(r.passed) << r.message;
    ASSERT_EQ(r.remaining, (std::vector<int>{2, 3}));
    ASSERT_EQ(r.actual.size(), 4u);
    // |0>_L on two qubits is (|00> + |11>)/sqrt2, |1>_L is (|01> + |10>)/sqrt2.
    const double h = std::sqrt(0.5);
    std::vector<Complex> expected(4);
    for (int clean = 0; clean < 4; ++clean) {
        const bool odd = (clean == 1 || clean == 2);
        expected[static_cast<std::size_t>(clean)] = odd ? -0.8 * h : 0.6 * h;
    }
    Complex ov{};
    for (std::size_t i = 0; i < 4; ++i) ov += std::conj(expected[i]) * r.actual[i];
    const Complex phase = ov / std::abs(ov);
    double worst = 0;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(r.actual[i] - phase * expected[i]));
    EXPECT_LE(worst, 1e-10);
}

TEST(Verifier, SequentialSignRuleAcrossCopies) {
    SampleStream rng(35, 0);
    const ParityCode code{2, 3};
    const auto p = pattern(code, {0, 3});
    for (auto outcomes : {std::vector<int>{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        VerifyCase c{code, p, single_qubit_matrix2(named_gate(GateName::H)), LogicalState::random(rng), outcomes,
                     rails(6, rng)};
        const auto r = statevector_verify(c);
        EXPECT_TRUE(r.passed) << r.message;
        EXPECT_EQ(r.logical_sign, outcomes[0] * outcomes[1]);
    }
}

TEST(Verifier, RejectsInvalidCases) {
    SampleStream rng(36, 0);
    const ParityCode code{2, 2};
    VerifyCase c{code, pattern(code, {0, 1}), Matrix2c::Identity(), {}, {1}, rails(4, rng)};
    EXPECT_THROW(statevector_verify(c), std::invalid_argument);
    c.pattern = pattern(code, {0});
    c.outcomes = {};
    EXPECT_THROW(statevector_verify(c), std::invalid_argument);
    c.outcomes = {2};
    EXPECT_THROW(statevector_verify(c), std::invalid_argument);
}
