#pragma once

// Ensemble estimates of the post-selected success probability and fidelity.
//
// Sample i draws all of its noise from SampleStream(master_seed, i). Samples
// are grouped in fixed-size blocks; each block is reduced in index order and
// block summaries are merged in block order, so an estimate does not depend
// on how many threads evaluated it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavg/averaging.hpp"
#include "uavg/gates.hpp"
#include "uavg/photonic.hpp"

namespace uavg {

enum class Estimator {
    /// <|<Psi|U|psi>|^2> / <P_s>
    ratio_of_means,
    /// <|<Psi|U|psi>|^2 / P_s>, samples with P_s = 0 excluded
    mean_of_ratios,
    /// |<<Psi|U|psi>>|^2 / <P_s>: overlap amplitude averaged before squaring
    coherent_amplitude,
};

std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t master_seed = 0;
    /// Payload input; defaults to |H> (single qubit) or one photon on each of
    /// modes 0 and 2 (four-mode gates).
    std::optional<PhotonicState> input_state;
    Estimator estimator = Estimator::ratio_of_means;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    std::uint64_t block_size = 1u << 14;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::uint64_t excluded = 0;  // mean_of_ratios only
};

struct McResult {
    McEstimate ps;
    McEstimate ratio_of_means;
    McEstimate mean_of_ratios;
    McEstimate coherent;

    const McEstimate& fidelity(Estimator e) const;
};

PhotonicState default_input(const GateSpec& spec);

/// Full ensemble for N = copies noisy copies of `spec`, averaged.
McResult run_ensemble(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg);

McEstimate estimate_ps(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg);
McEstimate estimate_fidelity(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg);

/// Whole Hadamard-tree circuit per sample, including encoder noise. The
/// payload gate is `spec`; config.gate_noise perturbs each copy.
McResult estimate_end_to_end(const AveragingConfig& config, const GateSpec& spec, const McConfig& cfg);

struct FusionEstimate {
    McEstimate ps;
    McEstimate fidelity;
};

/// Four-mode or Type-II gate on a two-photon input.
FusionEstimate estimate_fusion(GateFamily kind, const NoiseSpec& noise, int copies, const McConfig& cfg);

// ---------------------------------------------------------------------------
// Second-order discrimination

/// P_s - (1 - V + V/N) = nu^2 (c0 + c1/N + c2/N^2) + O(nu^3).
struct SecondOrderCoefficients {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct Hypothesis {
    std::string name;
    SecondOrderCoefficients coefficients;
};

/// The printed second-order forms for one gate family.
std::vector<Hypothesis> printed_hypotheses(GateFamily family);

struct DiscriminationPoint {
    double nu = 0.0;
    int copies = 1;
    double mean = 0.0;
    double std_error = 0.0;
};

struct HypothesisScore {
    std::string name;
    double distance_sq = 0.0;  // Mahalanobis, fit covariance
};

struct DiscriminationReport {
    GateFamily family = GateFamily::single_qubit;
    std::vector<DiscriminationPoint> points;
    SecondOrderCoefficients fit;
    double covariance[3][3]{};
    std::vector<HypothesisScore> scores;  // sorted, best first
    std::string selected;
    /// Runner-up distance minus best distance.
    double margin = 0.0;

    std::string to_text() const;
};

/// Weighted least squares of (mean - first order) / nu^2 on {1, 1/N, 1/N^2}.
/// Standard errors are floored at `stderr_floor` so exact rows stay finite.
DiscriminationReport discriminate(GateFamily family, std::vector<DiscriminationPoint> points,
                                  double stderr_floor = 1e-9);

/// Seed of grid cell `cell` in a sweep keyed by `master_seed`.
std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t cell);

/// Monte Carlo over the nu x N grid, then `discriminate`. Cells run nu-major
/// with cfg.samples samples each, cell k seeded by cell_seed(master_seed, k).
DiscriminationReport variant_discrimination(const GateSpec& spec, const NoiseSpec& noise_template,
                                            const std::vector<double>& nu_grid,
                                            const std::vector<int>& copies_grid, const McConfig& cfg);

}  // namespace uavg
