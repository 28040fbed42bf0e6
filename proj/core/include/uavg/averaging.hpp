#pragma once

// Unitary averaging over a Hadamard tree of N = 2^n redundant gate copies.
//
// Mode bookkeeping is copy-major: mode (copy * M + rail) carries rail `rail`
// of copy `copy`, M being the payload width. The payload enters and leaves on
// copy 0; every other copy's modes are error (herald) modes.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uavg/gates.hpp"
#include "uavg/photonic.hpp"
#include "uavg/random.hpp"

namespace uavg {

/// Splitter-angle noise of the encoder and decoder trees.
struct EncoderNoise {
    double variance = 0.0;
    /// One physical splitter acts on all rails of a copy pair (shared angle).
    bool correlated = true;
    NoiseKind kind = NoiseKind::gaussian;
};

struct AveragingConfig {
    int levels = 0;         // n; N = 2^n copies
    int payload_modes = 2;  // M
    NoiseSpec gate_noise{};
    std::optional<EncoderNoise> encoder_noise;

    int copies() const { return 1 << levels; }
    int total_modes() const { return copies() * payload_modes; }
    void validate() const;
};

/// Signs f_j of one decoder output branch.
struct HeraldWeights {
    std::vector<int> f;

    int size() const { return static_cast<int>(f.size()); }
};

/// Row `branch` of the n-fold tensor power of [[1, 1], [1, -1]]; branch 0 is
/// the all-plus success branch.
HeraldWeights herald_weights(int levels, int branch);

/// (1/N) sum_j U_j.
ModeMatrix averaged_operator(std::span<const ModeMatrix> units);
/// (1/N) sum_j f_j U_j.
ModeMatrix heralded_operator(std::span<const ModeMatrix> units, const HeraldWeights& weights);

struct Splitter {
    int low = 0;   // mode on the lower-indexed copy
    int high = 0;
    double theta = 0.0;
};

using SplitterLayer = std::vector<Splitter>;

/// Encoder and decoder splitter angles are pi/4 + delta. Deltas are laid out
/// encoder layers first, then decoder layers; within a layer by copy pair,
/// then by rail.
int tree_splitter_count(const AveragingConfig& config);

/// Draws per-splitter deltas from `config.encoder_noise` (all zero when unset).
std::vector<double> sample_encoder_deltas(const AveragingConfig& config, SampleStream& rng);

struct EncodedCircuit {
    int levels = 0;
    int payload_modes = 0;
    ModeMatrix matrix;  // decoder * diag(units) * encoder
    std::vector<int> success_modes;
    std::vector<int> error_modes;
    std::vector<ModeMatrix> units;
    std::vector<SplitterLayer> encoder;  // in the order a photon meets them
    std::vector<SplitterLayer> decoder;

    int copies() const { return 1 << levels; }
    int total_modes() const { return copies() * payload_modes; }

    /// Payload-in to payload-out block, i.e. the post-selected operator.
    ModeMatrix success_block() const;
    /// Payload-in to copy-`branch` block.
    ModeMatrix branch_block(int branch) const;
    /// Splitters met by a photon entering and leaving on each mode.
    std::vector<int> splitter_depth_per_mode() const;
};

/// Assembles decoder * diag(units) * encoder. `encoder_deltas` may be empty
/// (exact 50:50 splitters) or hold tree_splitter_count(config) entries.
EncodedCircuit build_tree(const AveragingConfig& config, std::span<const ModeMatrix> units,
                          std::span<const double> encoder_deltas = {});

struct PostSelectedRun {
    /// Normalised payload state; empty when the success branch has zero weight.
    std::optional<PhotonicState> conditional;
    /// Payload state before renormalisation.
    PhotonicState unnormalized;
    double success_probability = 0.0;

    bool herald_certain() const { return !conditional.has_value(); }
};

/// Evolves `input` (on the payload modes) through the circuit and
/// post-selects vacuum on every error mode.
PostSelectedRun run_postselected(const EncodedCircuit& circuit, const PhotonicState& input);

/// |<Psi|conditional>|^2 with Psi = target |input>.
double fidelity_vs_target(const PhotonicState& conditional, const ModeMatrix& target,
                          const PhotonicState& input);

// ---------------------------------------------------------------------------
// Encoder-noise scaling

struct ScalingPoint {
    double delta = 0.0;
    double deviation = 0.0;
};

struct EncoderScaling {
    std::vector<ScalingPoint> points;
    double slope = 0.0;  // log-log least squares; NaN with < 2 usable points
};

struct EncoderProbe {
    int levels = 1;
    ModeMatrix target = ModeMatrix::Identity(2, 2);
    bool correlated = true;
    std::uint64_t pattern_seed = 0x5eedULL;
};

/// Fixed perturbation direction in [-1, 1]^splitters (rails share a value when
/// `correlated`).
std::vector<double> encoder_pattern(const EncoderProbe& probe);

/// Frobenius distance between the success block and the target when every
/// copy is exactly the target and the encoder deltas are `delta * pattern`.
double encoder_deviation(const EncoderProbe& probe, double delta);

EncoderScaling encoder_error_scaling(const EncoderProbe& probe, std::span<const double> magnitudes);

/// Frobenius norm of the central finite-difference derivative of the success
/// block with respect to each independent encoder angle, at zero noise.
std::vector<double> encoder_first_derivative_norms(const EncoderProbe& probe, double step = 1e-6);

double loglog_slope(std::span<const ScalingPoint> points);

}  // namespace uavg
