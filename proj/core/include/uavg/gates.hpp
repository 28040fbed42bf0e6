#pragma once

// Parameterised optical gates and their noise-perturbed draws.

#include <array>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

#include "uavg/photonic.hpp"
#include "uavg/random.hpp"

namespace uavg {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

// ---------------------------------------------------------------------------
// Noise

enum class NoiseKind { gaussian, uniform, four_moment };

/// Zero-mean, variance-`variance` noise on every gate parameter.
///
/// `four_moment` draws from the symmetric three-point law {-a, 0, +a} with
/// a^2 = m4 / variance and P(+-a) = variance^2 / m4, which fixes the second
/// and fourth moments independently (m4 >= variance^2). m4 = variance^2
/// degenerates to +-sqrt(variance).
struct NoiseSpec {
    double variance = 0.0;
    NoiseKind kind = NoiseKind::gaussian;
    double fourth_moment = 0.0;  // four_moment only

    static NoiseSpec gaussian(double nu) { return {nu, NoiseKind::gaussian, 3.0 * nu * nu}; }
    static NoiseSpec uniform(double nu) { return {nu, NoiseKind::uniform, 1.8 * nu * nu}; }
    static NoiseSpec four_moment(double nu, double m4) { return {nu, NoiseKind::four_moment, m4}; }
    /// Moment convention with <dO^4> = nu^2.
    static NoiseSpec unit_kurtosis(double nu) { return four_moment(nu, nu * nu); }

    /// Throws std::invalid_argument when the parameters do not define a law.
    void validate() const;
    /// Theoretical fourth moment of the configured law.
    double expected_fourth_moment() const;

    double draw(SampleStream& rng) const;
};

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Single-qubit gate

/// Five-angle dual-rail single-qubit gate, radians.
struct GateParams {
    double theta = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double chi1 = 0.0;
    double chi2 = 0.0;

    static constexpr int kCount = 5;
    std::array<double, kCount> to_array() const { return {theta, phi1, phi2, chi1, chi2}; }
    static GateParams from_array(const std::array<double, kCount>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
};

struct SampledParams {
    GateParams base;
    std::array<double, GateParams::kCount> deltas{};

    GateParams sampled() const;
};

enum class GateName { I, X, Y, Z_alpha, H };

GateParams named_gate(GateName name, double alpha = 0.0);
/// Accepts "I", "X", "Y", "H" and "Z:<alpha>"; throws std::invalid_argument otherwise.
GateParams named_gate(std::string_view name);

/// [[e^{i(phi1+chi1)} sin t,  e^{i(phi2+chi1)} cos t],
///  [e^{i(phi1+chi2)} cos t, -e^{i(phi2+chi2)} sin t]]
Matrix2c single_qubit_matrix2(const GateParams& p);
ModeMatrix single_qubit_matrix(const GateParams& p);

SampledParams sample_noisy(const GateParams& base, const NoiseSpec& noise, SampleStream& rng);

// ---------------------------------------------------------------------------
// Four-mode gates

/// 2x2 splitter [[sin t, cos t], [cos t, -sin t]].
Matrix2c splitter(double theta);

/// Type-II fusion network: splitters (theta1 on modes 0,1; theta2 on 2,3),
/// then a swap of modes 1 and 3, then splitters (theta3 on 0,1; theta4 on 2,3).
struct FusionParams {
    double theta1 = std::numbers::pi / 4;
    double theta2 = std::numbers::pi / 4;
    double theta3 = std::numbers::pi / 4;
    double theta4 = std::numbers::pi / 4;

    static constexpr int kCount = 4;
    std::array<double, kCount> to_array() const { return {theta1, theta2, theta3, theta4}; }
    static FusionParams from_array(const std::array<double, kCount>& a) {
        return {a[0], a[1], a[2], a[3]};
    }
};

Matrix4c fusion_type2_matrix4(const FusionParams& p);
ModeMatrix fusion_type2_matrix(const FusionParams& p);
FusionParams sample_noisy(const FusionParams& base, const NoiseSpec& noise, SampleStream& rng);

/// General four-mode interferometer, three splitter columns each preceded by
/// a phase layer on all four modes (0-based modes):
///
///   P0 -> [BS(0,1) a0, BS(2,3) a1] -> P1 -> [BS(0,2) b0, BS(1,3) b1]
///      -> P2 -> [BS(0,1) c0, BS(2,3) c1]
///
/// splitters = {a0, a1, b0, b1, c0, c1}; phases = {P0[0..3], P1[0..3], P2[0..3]}.
/// Every input-output path crosses three phases and three splitters, six
/// noisy parameters in total.
struct FourModeParams {
    std::array<double, 6> splitters{};
    std::array<double, 12> phases{};

    static constexpr int kCount = 18;
    static constexpr int kPathDepth = 6;

    /// 50:50 outer columns, centre column acting as the 1<->3 swap, a pi phase
    /// on mode 2 in P2 cancelling the centre splitter's sign. Equals
    /// fusion_type2_matrix(FusionParams{}) exactly.
    static FourModeParams type2_compatible();

    std::array<double, kCount> to_array() const;
    static FourModeParams from_array(const std::array<double, kCount>& a);
};

Matrix4c four_mode_matrix4(const FourModeParams& p);
ModeMatrix four_mode_matrix(const FourModeParams& p);
FourModeParams sample_noisy(const FourModeParams& base, const NoiseSpec& noise, SampleStream& rng);

// ---------------------------------------------------------------------------
// Families

/// Depth d (noisy parameters per path) and the characteristic noise V = d * nu.
struct CircuitNoiseProfile {
    int depth = 1;
    double variance = 0.0;

    double characteristic() const { return depth * variance; }
};

using GateSpec = std::variant<GateParams, FourModeParams, FusionParams>;

enum class GateFamily { single_qubit, four_mode, type2 };

GateFamily family_of(const GateSpec& spec);
std::string_view to_string(GateFamily family);
GateFamily parse_gate_family(std::string_view name);

int mode_count(const GateSpec& spec);
/// Noisy parameters crossed by every input-output path: 3, 6 or 2.
int path_depth(const GateSpec& spec);
CircuitNoiseProfile noise_profile(const GateSpec& spec, const NoiseSpec& noise);

ModeMatrix target_matrix(const GateSpec& spec);
ModeMatrix sample_matrix(const GateSpec& spec, const NoiseSpec& noise, SampleStream& rng);

}  // namespace uavg
