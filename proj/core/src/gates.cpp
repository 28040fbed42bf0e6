#include "uavg/gates.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace uavg {

namespace {

constexpr double kPi = std::numbers::pi;

Complex phase(double angle) { return std::polar(1.0, angle); }

template <std::size_t K>
std::array<double, K> perturb(std::array<double, K> values, const NoiseSpec& noise, SampleStream& rng) {
    for (auto& v : values) v += noise.draw(rng);
    return values;
}

// Places a 2x2 block on modes (a, b) of a 4x4 identity-initialised matrix.
void place(Matrix4c& m, int a, int b, const Matrix2c& block) {
    m(a, a) = block(0, 0);
    m(a, b) = block(0, 1);
    m(b, a) = block(1, 0);
    m(b, b) = block(1, 1);
}

Matrix4c column(int a0, int b0, double t0, int a1, int b1, double t1) {
    Matrix4c m = Matrix4c::Zero();
    place(m, a0, b0, splitter(t0));
    place(m, a1, b1, splitter(t1));
    return m;
}

Matrix4c phase_layer(const std::array<double, 12>& phases, int layer) {
    Matrix4c m = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = phase(phases[static_cast<std::size_t>(4 * layer + i)]);
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Noise

void NoiseSpec::validate() const {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("NoiseSpec: variance must be finite and >= 0");
    }
    if (kind == NoiseKind::four_moment && variance > 0.0) {
        if (!(fourth_moment >= variance * variance * (1.0 - 1e-12))) {
            throw std::invalid_argument("NoiseSpec: four-moment law needs m4 >= variance^2");
        }
    }
}

double NoiseSpec::expected_fourth_moment() const {
    switch (kind) {
        case NoiseKind::gaussian: return 3.0 * variance * variance;
        case NoiseKind::uniform: return 1.8 * variance * variance;
        case NoiseKind::four_moment: return fourth_moment;
    }
    return 0.0;
}

double NoiseSpec::draw(SampleStream& rng) const {
    if (variance == 0.0) return 0.0;
    switch (kind) {
        case NoiseKind::gaussian: {
            std::normal_distribution<double> dist(0.0, std::sqrt(variance));
            return dist(rng);
        }
        case NoiseKind::uniform: {
            const double half_width = std::sqrt(3.0 * variance);
            return half_width * (2.0 * rng.uniform() - 1.0);
        }
        case NoiseKind::four_moment: {
            const double p = std::min(1.0, variance * variance / fourth_moment);
            const double a = std::sqrt(fourth_moment / variance);
            const double u = rng.uniform();
            if (u >= p) return 0.0;
            return u < 0.5 * p ? -a : a;
        }
    }
    return 0.0;
}

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::four_moment: return "four-moment";
    }
    return "?";
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "uniform") return NoiseKind::uniform;
    if (name == "four-moment") return NoiseKind::four_moment;
    throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Single-qubit gate

GateParams SampledParams::sampled() const {
    auto values = base.to_array();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += deltas[i];
    return GateParams::from_array(values);
}

GateParams named_gate(GateName name, double alpha) {
    switch (name) {
        case GateName::I: return {kPi / 2, 0.0, 0.0, 0.0, kPi};
        case GateName::X: return {0.0, 0.0, 0.0, 0.0, 0.0};
        case GateName::Y: return {0.0, kPi / 2, 0.0, -kPi / 2, 0.0};
        case GateName::Z_alpha: return {kPi / 2, 0.0, 0.0, 0.0, alpha};
        case GateName::H: return {kPi / 4, 0.0, 0.0, 0.0, 0.0};
    }
    throw std::invalid_argument("named_gate: unknown gate");
}

GateParams named_gate(std::string_view name) {
    if (name == "I") return named_gate(GateName::I);
    if (name == "X") return named_gate(GateName::X);
    if (name == "Y") return named_gate(GateName::Y);
    if (name == "H") return named_gate(GateName::H);
    if (name.starts_with("Z:")) {
        const std::string text(name.substr(2));
        std::size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size()) {
            throw std::invalid_argument("named_gate: bad Z angle in '" + std::string(name) + "'");
        }
        return named_gate(GateName::Z_alpha, alpha);
    }
    throw std::invalid_argument("named_gate: unknown gate '" + std::string(name) + "'");
}

Matrix2c single_qubit_matrix2(const GateParams& p) {
    const double s = std::sin(p.theta);
    const double c = std::cos(p.theta);
    const Complex e11 = phase(p.phi1 + p.chi1);
    const Complex e21 = phase(p.phi2 + p.chi1);
    const Complex e12 = phase(p.phi1 + p.chi2);
    const Complex e22 = phase(p.phi2 + p.chi2);
    Matrix2c m;
    m << e11 * s, e21 * c,
         e12 * c, -e22 * s;
    return m;
}

ModeMatrix single_qubit_matrix(const GateParams& p) { return single_qubit_matrix2(p); }

SampledParams sample_noisy(const GateParams& base, const NoiseSpec& noise, SampleStream& rng) {
    SampledParams out{base, {}};
    for (auto& d : out.deltas) d = noise.draw(rng);
    return out;
}

// ---------------------------------------------------------------------------
// Four-mode gates

Matrix2c splitter(double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    Matrix2c m;
    m << s, c,
         c, -s;
    return m;
}

Matrix4c fusion_type2_matrix4(const FusionParams& p) {
    Matrix4c swap = Matrix4c::Zero();
    swap(0, 0) = 1.0;
    swap(1, 3) = 1.0;
    swap(2, 2) = 1.0;
    swap(3, 1) = 1.0;
    return column(0, 1, p.theta3, 2, 3, p.theta4) * swap * column(0, 1, p.theta1, 2, 3, p.theta2);
}

ModeMatrix fusion_type2_matrix(const FusionParams& p) { return fusion_type2_matrix4(p); }

FusionParams sample_noisy(const FusionParams& base, const NoiseSpec& noise, SampleStream& rng) {
    return FusionParams::from_array(perturb(base.to_array(), noise, rng));
}

FourModeParams FourModeParams::type2_compatible() {
    FourModeParams p;
    p.splitters = {kPi / 4, kPi / 4, kPi / 2, 0.0, kPi / 4, kPi / 4};
    p.phases.fill(0.0);
    p.phases[8 + 2] = kPi;
    return p;
}

std::array<double, FourModeParams::kCount> FourModeParams::to_array() const {
    std::array<double, kCount> out{};
    std::copy(splitters.begin(), splitters.end(), out.begin());
    std::copy(phases.begin(), phases.end(), out.begin() + 6);
    return out;
}

FourModeParams FourModeParams::from_array(const std::array<double, kCount>& a) {
    FourModeParams p;
    std::copy(a.begin(), a.begin() + 6, p.splitters.begin());
    std::copy(a.begin() + 6, a.end(), p.phases.begin());
    return p;
}

Matrix4c four_mode_matrix4(const FourModeParams& p) {
    const auto& t = p.splitters;
    const Matrix4c col_a = column(0, 1, t[0], 2, 3, t[1]);
    const Matrix4c col_b = column(0, 2, t[2], 1, 3, t[3]);
    const Matrix4c col_c = column(0, 1, t[4], 2, 3, t[5]);
    return col_c * phase_layer(p.phases, 2) * col_b * phase_layer(p.phases, 1) * col_a *
           phase_layer(p.phases, 0);
}

ModeMatrix four_mode_matrix(const FourModeParams& p) { return four_mode_matrix4(p); }

FourModeParams sample_noisy(const FourModeParams& base, const NoiseSpec& noise, SampleStream& rng) {
    return FourModeParams::from_array(perturb(base.to_array(), noise, rng));
}

// ---------------------------------------------------------------------------
// Families

GateFamily family_of(const GateSpec& spec) {
    switch (spec.index()) {
        case 0: return GateFamily::single_qubit;
        case 1: return GateFamily::four_mode;
        default: return GateFamily::type2;
    }
}

std::string_view to_string(GateFamily family) {
    switch (family) {
        case GateFamily::single_qubit: return "single";
        case GateFamily::four_mode: return "four-mode";
        case GateFamily::type2: return "type2";
    }
    return "?";
}

GateFamily parse_gate_family(std::string_view name) {
    if (name == "single") return GateFamily::single_qubit;
    if (name == "four-mode") return GateFamily::four_mode;
    if (name == "type2") return GateFamily::type2;
    throw std::invalid_argument("unknown gate family '" + std::string(name) + "'");
}

int mode_count(const GateSpec& spec) { return family_of(spec) == GateFamily::single_qubit ? 2 : 4; }

int path_depth(const GateSpec& spec) {
    switch (family_of(spec)) {
        case GateFamily::single_qubit: return 3;
        case GateFamily::four_mode: return FourModeParams::kPathDepth;
        case GateFamily::type2: return 2;
    }
    return 0;
}

CircuitNoiseProfile noise_profile(const GateSpec& spec, const NoiseSpec& noise) {
    return {path_depth(spec), noise.variance};
}

ModeMatrix target_matrix(const GateSpec& spec) {
    return std::visit(
        [](const auto& p) -> ModeMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GateParams>) return single_qubit_matrix(p);
            else if constexpr (std::is_same_v<T, FourModeParams>) return four_mode_matrix(p);
            else return fusion_type2_matrix(p);
        },
        spec);
}

ModeMatrix sample_matrix(const GateSpec& spec, const NoiseSpec& noise, SampleStream& rng) {
    return std::visit(
        [&](const auto& p) -> ModeMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GateParams>) {
                return single_qubit_matrix(sample_noisy(p, noise, rng).sampled());
            } else if constexpr (std::is_same_v<T, FourModeParams>) {
                return four_mode_matrix(sample_noisy(p, noise, rng));
            } else {
                return fusion_type2_matrix(sample_noisy(p, noise, rng));
            }
        },
        spec);
}

}  // namespace uavg
