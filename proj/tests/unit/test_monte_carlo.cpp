#include <gtest/gtest.h>

#include <cmath>

#include "uavg/analytic.hpp"
#include "uavg/monte_carlo.hpp"

using namespace uavg;

namespace {

McConfig cfg(std::uint64_t samples, std::uint64_t seed, unsigned threads = 1) {
    McConfig c;
    c.samples = samples;
    c.master_seed = seed;
    c.threads = threads;
    return c;
}

double band(double nu, const McEstimate& e) { return 10 * nu * nu + 3 * e.std_error; }

PhotonicState qubit(Complex h, Complex v) {
    const Complex a[] = {h, v};
    return PhotonicState::from_amplitudes(std::span<const Complex>(a, 2)).normalized();
}

const GateSpec kIdentity = named_gate(GateName::I);

}  // namespace

TEST(MonteCarlo, ZeroNoiseIsExact) {
    const GateSpec specs[] = {named_gate(GateName::H), FourModeParams::type2_compatible(), FusionParams{}};
    for (const auto& spec : specs) {
        for (int n : {1, 2, 8}) {
            const auto r = run_ensemble(spec, NoiseSpec::gaussian(0), n, cfg(500, 1));
            EXPECT_EQ(r.ps.mean, 1.0);
            EXPECT_EQ(r.ps.std_error, 0.0);
            EXPECT_NEAR(r.ratio_of_means.mean, 1.0, 1e-15);
            EXPECT_NEAR(r.mean_of_ratios.mean, 1.0, 1e-15);
            EXPECT_NEAR(r.coherent.mean, 1.0, 1e-15);
            EXPECT_EQ(r.ps.n, 500u);
        }
    }
    for (auto f : {GateFamily::four_mode, GateFamily::type2}) {
        const auto e = estimate_fusion(f, NoiseSpec::gaussian(0), 4, cfg(100, 2));
        EXPECT_EQ(e.ps.mean, 1.0);
        EXPECT_NEAR(e.fidelity.mean, 1.0, 1e-15);
    }
}

TEST(MonteCarlo, ThreadCountInvariance) {
    auto c = cfg(20'000, 3);
    c.block_size = 1500;
    const auto noise = NoiseSpec::gaussian(0.02);
    const auto one = run_ensemble(kIdentity, noise, 4, c);
    for (unsigned t : {2u, 3u, 7u}) {
        c.threads = t;
        const auto many = run_ensemble(kIdentity, noise, 4, c);
        EXPECT_EQ(one.ps.mean, many.ps.mean);
        EXPECT_EQ(one.ps.std_error, many.ps.std_error);
        EXPECT_EQ(one.ratio_of_means.mean, many.ratio_of_means.mean);
        EXPECT_EQ(one.mean_of_ratios.mean, many.mean_of_ratios.mean);
        EXPECT_EQ(one.coherent.mean, many.coherent.mean);
    }
}

TEST(MonteCarlo, DenseKernelMatchesStatePath) {
    // One sample: redraw its copies here and evolve through the sparse simulator.
    const NoiseSpec noise = NoiseSpec::gaussian(0.05);
    PhotonicState input(4, 2);
    input.add(FockOccupation::pair(4, 0, 0), Complex(0.3, 0.1));
    input.add(FockOccupation::pair(4, 1, 3), Complex(-0.5, 0.2));
    input.add(FockOccupation::pair(4, 2, 2), Complex(0.1, -0.7));
    input = input.normalized();
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        auto c = cfg(1, seed);
        c.input_state = input;
        const GateSpec spec = FusionParams{};
        const auto r = run_ensemble(spec, noise, 2, c);

        SampleStream rng(seed, 0);
        ModeMatrix avg = ModeMatrix::Zero(4, 4);
        for (int j = 0; j < 2; ++j) avg += sample_matrix(spec, noise, rng);
        avg /= 2.0;
        const auto out = uavg::apply(avg, input);
        const auto ideal = uavg::apply(target_matrix(spec), input);
        EXPECT_NEAR(r.ps.mean, out.norm_sq(), 1e-13);
        EXPECT_NEAR(r.ratio_of_means.mean, std::norm(ideal.inner(out)) / out.norm_sq(), 1e-13);
    }
}

TEST(MonteCarlo, SingleCopyReproducesTheBareGate) {
    // Identity gate on |H>: the overlap is exp(i(dphi1 + dchi1)) cos(dtheta),
    // so <|x|^2> = (1 + exp(-2 nu)) / 2 and |<x>|^2 = exp(-3 nu) under Gaussian noise.
    const double nu = 0.01;
    const auto r = run_ensemble(kIdentity, NoiseSpec::gaussian(nu), 1, cfg(200'000, 8));
    EXPECT_NEAR(r.ps.mean, 1.0, 1e-12);
    EXPECT_NEAR(r.ratio_of_means.mean, (1 + std::exp(-2 * nu)) / 2, 3 * r.ratio_of_means.std_error);
    EXPECT_NEAR(r.coherent.mean, std::exp(-3 * nu), 3 * r.coherent.std_error);
    EXPECT_NEAR(r.coherent.mean, 1 - 3 * nu, band(nu, r.coherent));
}

namespace {

// First-order deficit coefficient (1 - P_s) / nu at small nu.
double deficit_slope(const GateSpec& spec, const PhotonicState& input, int copies) {
    const double nu = 1e-3;
    auto c = cfg(100'000, 9);
    c.input_state = input;
    return (1 - estimate_ps(spec, NoiseSpec::gaussian(nu), copies, c).mean) / nu;
}

}  // namespace

TEST(MonteCarlo, SinglePhotonDeficitMatchesPathDepth) {
    const auto one = PhotonicState::basis(FockOccupation::single(4, 0));
    for (int n : {2, 4}) {
        const double keep = 1 - 1.0 / n;
        EXPECT_NEAR(deficit_slope(FourModeParams::type2_compatible(), one, n), 6 * keep, 0.02 * 6 * keep);
        EXPECT_NEAR(deficit_slope(FusionParams{}, one, n), 2 * keep, 0.02 * 2 * keep);
        EXPECT_NEAR(deficit_slope(kIdentity, PhotonicState::basis(FockOccupation::single(2, 0)), n), 3 * keep,
                    0.02 * 3 * keep);
    }
}

TEST(MonteCarlo, TwoPhotonDeficitIsPerPhoton) {
    // Each photon crosses its own noisy path, so a two-photon payload loses
    // twice the single-photon success probability at first order.
    const auto two = PhotonicState::basis(FockOccupation::pair(4, 0, 2));
    for (int n : {2, 4}) {
        const double keep = 1 - 1.0 / n;
        EXPECT_NEAR(deficit_slope(FourModeParams::type2_compatible(), two, n), 12 * keep, 0.02 * 12 * keep);
        EXPECT_NEAR(deficit_slope(FusionParams{}, two, n), 4 * keep, 0.02 * 4 * keep);
    }
}

TEST(MonteCarlo, FirstOrderBandSingleQubit) {
    const double nu = 0.01;
    for (int n : {2, 8}) {
        const auto e = estimate_ps(kIdentity, NoiseSpec::gaussian(nu), n, cfg(100'000, 11));
        EXPECT_NEAR(e.mean, ps_first_order(3 * nu, n), band(nu, e));
    }
}

TEST(MonteCarlo, InputStateIndependence) {
    const double nu = 0.01;
    const PhotonicState inputs[] = {qubit(1, 0), qubit(0, 1), qubit(1, 1)};
    std::vector<McEstimate> es;
    for (const auto& in : inputs) {
        auto c = cfg(100'000, 12);
        c.input_state = in;
        es.push_back(estimate_ps(named_gate(GateName::H), NoiseSpec::gaussian(nu), 4, c));
    }
    for (std::size_t i = 1; i < es.size(); ++i) {
        const double se = std::hypot(es[0].std_error, es[i].std_error);
        EXPECT_NEAR(es[0].mean, es[i].mean, 10 * nu * nu + 3 * se);
    }
}

TEST(MonteCarlo, EstimatorDiscrepancyIsSecondOrder) {
    const double nu = 0.02;
    const auto r = run_ensemble(kIdentity, NoiseSpec::gaussian(nu), 2, cfg(100'000, 13));
    EXPECT_LE(std::abs(r.ratio_of_means.mean - r.mean_of_ratios.mean), 10 * nu * nu);
    EXPECT_EQ(r.mean_of_ratios.excluded, 0u);
    EXPECT_EQ(r.mean_of_ratios.n, 100'000u);
}

TEST(MonteCarlo, EstimatorSelection) {
    auto c = cfg(10'000, 14);
    const auto r = run_ensemble(kIdentity, NoiseSpec::gaussian(0.01), 2, c);
    for (auto e : {Estimator::ratio_of_means, Estimator::mean_of_ratios, Estimator::coherent_amplitude}) {
        c.estimator = e;
        EXPECT_EQ(estimate_fidelity(kIdentity, NoiseSpec::gaussian(0.01), 2, c).mean, r.fidelity(e).mean);
        EXPECT_EQ(parse_estimator(to_string(e)), e);
    }
    EXPECT_THROW(parse_estimator("median"), std::invalid_argument);
}

TEST(MonteCarlo, RejectsBadInputs) {
    EXPECT_THROW(estimate_ps(kIdentity, NoiseSpec::gaussian(0.01), 3, cfg(10, 1)), std::invalid_argument);
    EXPECT_THROW(estimate_ps(kIdentity, NoiseSpec::gaussian(-1), 2, cfg(10, 1)), std::invalid_argument);
    auto c = cfg(10, 1);
    c.input_state = PhotonicState::basis(FockOccupation::single(4, 0));
    EXPECT_THROW(estimate_ps(kIdentity, NoiseSpec::gaussian(0.01), 2, c), std::invalid_argument);
    EXPECT_THROW(estimate_fusion(GateFamily::single_qubit, NoiseSpec::gaussian(0.01), 2, cfg(10, 1)),
                 std::invalid_argument);
}

TEST(EndToEnd, ZeroNoiseIsExact) {
    AveragingConfig a;
    a.levels = 2;
    a.encoder_noise = EncoderNoise{0.0};
    const auto r = estimate_end_to_end(a, named_gate(GateName::Y), cfg(50, 15));
    EXPECT_NEAR(r.ps.mean, 1.0, 1e-12);
    EXPECT_NEAR(r.ratio_of_means.mean, 1.0, 1e-12);
}

TEST(EndToEnd, EncoderNoiseIsSuppressed) {
    const double ve = 1e-6;
    for (bool correlated : {true, false}) {
        AveragingConfig a;
        a.levels = 1;
        a.encoder_noise = EncoderNoise{ve, correlated};
        const auto r = estimate_end_to_end(a, named_gate(GateName::H), cfg(5'000, 16));
        EXPECT_LE(1 - r.ps.mean, 10 * ve);
        EXPECT_GT(1 - r.ps.mean, 0.0);
        EXPECT_LE(1 - r.ratio_of_means.mean, 100 * ve * ve);
    }
}

TEST(EndToEnd, InsensitiveToSmallEncoderNoise) {
    const double nu = 0.01, ve = 1e-4;
    AveragingConfig a;
    a.levels = 1;
    a.gate_noise = NoiseSpec::gaussian(nu);
    const auto clean = estimate_end_to_end(a, kIdentity, cfg(20'000, 17));
    a.encoder_noise = EncoderNoise{ve};
    const auto noisy = estimate_end_to_end(a, kIdentity, cfg(20'000, 17));
    EXPECT_NEAR(clean.ps.mean, noisy.ps.mean, 3 * std::hypot(clean.ps.std_error, noisy.ps.std_error) + 10 * ve);
}

TEST(EndToEnd, AgreesWithTheAveragedOperatorKernel) {
    const double nu = 0.01;
    AveragingConfig a;
    a.levels = 2;
    a.gate_noise = NoiseSpec::gaussian(nu);
    const auto tree = estimate_end_to_end(a, kIdentity, cfg(20'000, 18));
    const auto fast = run_ensemble(kIdentity, a.gate_noise, 4, cfg(20'000, 19));
    EXPECT_NEAR(tree.ps.mean, fast.ps.mean, 4 * std::hypot(tree.ps.std_error, fast.ps.std_error));
    EXPECT_THROW(
        [&] {
            a.levels = 4;
            estimate_end_to_end(a, kIdentity, cfg(1, 1));
        }(),
        std::invalid_argument);
}

namespace {

std::vector<DiscriminationPoint> synthetic(const SecondOrderCoefficients& c, int depth) {
    std::vector<DiscriminationPoint> pts;
    for (double nu : {0.005, 0.01, 0.02}) {
        for (int n : {1, 2, 4, 8}) {
            const double inv = 1.0 / n;
            const double mean = ps_first_order(depth * nu, n) + nu * nu * (c.c0 + c.c1 * inv + c.c2 * inv * inv);
            pts.push_back({nu, n, mean, 1e-6});
        }
    }
    return pts;
}

}  // namespace

TEST(Discrimination, SelectsTheGeneratingVariant) {
    for (auto family : {GateFamily::single_qubit, GateFamily::type2, GateFamily::four_mode}) {
        const int depth = family == GateFamily::single_qubit ? 3 : family == GateFamily::four_mode ? 6 : 2;
        for (const auto& h : printed_hypotheses(family)) {
            const auto r = discriminate(family, synthetic(h.coefficients, depth));
            EXPECT_EQ(r.selected, h.name);
            EXPECT_NEAR(r.fit.c0, h.coefficients.c0, 1e-6);
            EXPECT_NEAR(r.fit.c1, h.coefficients.c1, 1e-6);
            EXPECT_NEAR(r.fit.c2, h.coefficients.c2, 1e-6);
            EXPECT_GT(r.margin, 0.0);
            EXPECT_NE(r.to_text().find("selected," + h.name), std::string::npos);
        }
    }
}

TEST(Discrimination, MainTextFormulaSelectsMainText) {
    std::vector<DiscriminationPoint> pts;
    for (double nu : {0.005, 0.01})
        for (int n : {1, 2, 4, 8}) pts.push_back({nu, n, ps_single(nu, n, FormulaVariant::main_text), 1e-7});
    EXPECT_EQ(discriminate(GateFamily::single_qubit, pts).selected, "main-text");
}

TEST(Discrimination, RejectsDegenerateGrids) {
    std::vector<DiscriminationPoint> pts{{0.01, 2, 0.98, 1e-4}, {0.02, 2, 0.97, 1e-4}};
    EXPECT_THROW(discriminate(GateFamily::single_qubit, pts), std::invalid_argument);
    EXPECT_THROW(discriminate(GateFamily::single_qubit, {}), std::invalid_argument);
}

TEST(Discrimination, ReproducibleUnderSeed) {
    auto c = cfg(4'000, 20);
    const std::vector<double> nus{0.01, 0.02};
    const std::vector<int> ns{1, 2, 4};
    const auto a = variant_discrimination(kIdentity, NoiseSpec::gaussian(0.01), nus, ns, c);
    c.threads = 3;
    const auto b = variant_discrimination(kIdentity, NoiseSpec::gaussian(0.01), nus, ns, c);
    EXPECT_EQ(a.to_text(), b.to_text());
    EXPECT_EQ(a.points.size(), 6u);
    EXPECT_NE(cell_seed(20, 0), cell_seed(20, 1));
    EXPECT_NE(cell_seed(20, 0), cell_seed(21, 0));
}
