#include "uavg/averaging.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uavg {

namespace {

// Post-selection weight below which the success branch counts as empty.
constexpr double kZeroProbability = 1e-24;

struct SplitterSlot {
    bool decoder;
    int level;
    int pair;  // index of the lower copy among copies with bit `level` clear
};

std::vector<int> lower_copies(int levels, int level) {
    std::vector<int> out;
    const int n_copies = 1 << levels;
    for (int c = 0; c < n_copies; ++c) {
        if (((c >> level) & 1) == 0) out.push_back(c);
    }
    return out;
}

// Encoder meets the outermost level (highest bit) first; the decoder mirrors it.
std::vector<int> encoder_level_order(int levels) {
    std::vector<int> order;
    for (int l = levels - 1; l >= 0; --l) order.push_back(l);
    return order;
}

std::vector<int> decoder_level_order(int levels) {
    std::vector<int> order;
    for (int l = 0; l < levels; ++l) order.push_back(l);
    return order;
}

double splitter_sin(double delta) {
    return delta == 0.0 ? std::numbers::sqrt2 / 2 : std::sin(std::numbers::pi / 4 + delta);
}

double splitter_cos(double delta) {
    return delta == 0.0 ? std::numbers::sqrt2 / 2 : std::cos(std::numbers::pi / 4 + delta);
}

// Left-multiplies `m` by one splitter on rows (low, high).
void apply_rows(ModeMatrix& m, const Splitter& sp) {
    const double delta = sp.theta - std::numbers::pi / 4;
    const double s = splitter_sin(delta);
    const double c = splitter_cos(delta);
    const Eigen::RowVectorXcd lo = m.row(sp.low);
    const Eigen::RowVectorXcd hi = m.row(sp.high);
    m.row(sp.low) = s * lo + c * hi;
    m.row(sp.high) = c * lo - s * hi;
}

std::vector<SplitterLayer> make_layers(const AveragingConfig& cfg, const std::vector<int>& levels,
                                       std::span<const double> deltas, std::size_t& cursor) {
    const int m = cfg.payload_modes;
    std::vector<SplitterLayer> layers;
    for (int level : levels) {
        SplitterLayer layer;
        for (int low_copy : lower_copies(cfg.levels, level)) {
            const int high_copy = low_copy + (1 << level);
            for (int rail = 0; rail < m; ++rail) {
                const double delta = deltas.empty() ? 0.0 : deltas[cursor];
                ++cursor;
                layer.push_back({low_copy * m + rail, high_copy * m + rail, std::numbers::pi / 4 + delta});
            }
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

}  // namespace

void AveragingConfig::validate() const {
    if (levels < 0 || levels > 10) throw std::invalid_argument("AveragingConfig: levels must be in [0, 10]");
    if (payload_modes < 1) throw std::invalid_argument("AveragingConfig: payload_modes must be >= 1");
    gate_noise.validate();
    if (encoder_noise && !(encoder_noise->variance >= 0.0)) {
        throw std::invalid_argument("AveragingConfig: encoder variance must be >= 0");
    }
}

HeraldWeights herald_weights(int levels, int branch) {
    if (levels < 0 || levels > 30) throw std::invalid_argument("herald_weights: bad level count");
    const int n_copies = 1 << levels;
    if (branch < 0 || branch >= n_copies) {
        throw std::out_of_range("herald_weights: branch " + std::to_string(branch) + " outside [0, " +
                                std::to_string(n_copies) + ")");
    }
    HeraldWeights w;
    w.f.reserve(static_cast<std::size_t>(n_copies));
    for (int c = 0; c < n_copies; ++c) {
        w.f.push_back(std::popcount(static_cast<unsigned>(branch & c)) % 2 == 0 ? 1 : -1);
    }
    return w;
}

ModeMatrix averaged_operator(std::span<const ModeMatrix> units) {
    if (units.empty()) throw std::invalid_argument("averaged_operator: no units");
    HeraldWeights plus;
    plus.f.assign(units.size(), 1);
    return heralded_operator(units, plus);
}

ModeMatrix heralded_operator(std::span<const ModeMatrix> units, const HeraldWeights& weights) {
    if (units.empty()) throw std::invalid_argument("heralded_operator: no units");
    if (weights.size() != static_cast<int>(units.size())) {
        throw std::invalid_argument("heralded_operator: weight count does not match unit count");
    }
    const auto dim = units.front().rows();
    ModeMatrix acc = ModeMatrix::Zero(dim, units.front().cols());
    for (std::size_t j = 0; j < units.size(); ++j) {
        if (units[j].rows() != dim || units[j].cols() != acc.cols()) {
            throw std::invalid_argument("heralded_operator: unit dimensions differ");
        }
        acc += static_cast<double>(weights.f[j]) * units[j];
    }
    return acc / static_cast<double>(units.size());
}

int tree_splitter_count(const AveragingConfig& config) {
    return 2 * config.levels * (config.copies() / 2) * config.payload_modes;
}

std::vector<double> sample_encoder_deltas(const AveragingConfig& config, SampleStream& rng) {
    std::vector<double> deltas(static_cast<std::size_t>(tree_splitter_count(config)), 0.0);
    if (!config.encoder_noise || config.encoder_noise->variance == 0.0) return deltas;
    const auto& en = *config.encoder_noise;
    NoiseSpec law = NoiseSpec::gaussian(en.variance);
    if (en.kind == NoiseKind::uniform) law = NoiseSpec::uniform(en.variance);
    if (en.kind == NoiseKind::four_moment) law = NoiseSpec::unit_kurtosis(en.variance);
    const auto m = static_cast<std::size_t>(config.payload_modes);
    for (std::size_t i = 0; i < deltas.size(); i += m) {
        deltas[i] = law.draw(rng);
        for (std::size_t r = 1; r < m; ++r) deltas[i + r] = en.correlated ? deltas[i] : law.draw(rng);
    }
    return deltas;
}

ModeMatrix EncodedCircuit::success_block() const { return branch_block(0); }

ModeMatrix EncodedCircuit::branch_block(int branch) const {
    if (branch < 0 || branch >= copies()) throw std::out_of_range("branch_block: bad branch");
    return matrix.block(branch * payload_modes, 0, payload_modes, payload_modes);
}

std::vector<int> EncodedCircuit::splitter_depth_per_mode() const {
    std::vector<int> depth(static_cast<std::size_t>(total_modes()), 0);
    auto count = [&](const std::vector<SplitterLayer>& layers) {
        for (const auto& layer : layers) {
            for (const auto& sp : layer) {
                ++depth[static_cast<std::size_t>(sp.low)];
                ++depth[static_cast<std::size_t>(sp.high)];
            }
        }
    };
    count(encoder);
    count(decoder);
    return depth;
}

EncodedCircuit build_tree(const AveragingConfig& config, std::span<const ModeMatrix> units,
                          std::span<const double> encoder_deltas) {
    config.validate();
    const int n_copies = config.copies();
    const int m = config.payload_modes;
    if (static_cast<int>(units.size()) != n_copies) {
        throw std::invalid_argument("build_tree: expected " + std::to_string(n_copies) + " units, got " +
                                    std::to_string(units.size()));
    }
    for (const auto& u : units) {
        if (u.rows() != m || u.cols() != m) throw std::invalid_argument("build_tree: unit dimension != payload_modes");
    }
    if (!encoder_deltas.empty() && static_cast<int>(encoder_deltas.size()) != tree_splitter_count(config)) {
        throw std::invalid_argument("build_tree: wrong number of encoder deltas");
    }

    EncodedCircuit c;
    c.levels = config.levels;
    c.payload_modes = m;
    c.units.assign(units.begin(), units.end());
    std::size_t cursor = 0;
    c.encoder = make_layers(config, encoder_level_order(config.levels), encoder_deltas, cursor);
    c.decoder = make_layers(config, decoder_level_order(config.levels), encoder_deltas, cursor);

    const int total = config.total_modes();
    ModeMatrix encode = ModeMatrix::Identity(total, total);
    for (const auto& layer : c.encoder) {
        for (const auto& sp : layer) apply_rows(encode, sp);
    }
    ModeMatrix body = ModeMatrix::Zero(total, total);
    for (int j = 0; j < n_copies; ++j) body.block(j * m, j * m, m, m) = units[static_cast<std::size_t>(j)];
    ModeMatrix full = body * encode;
    for (const auto& layer : c.decoder) {
        for (const auto& sp : layer) apply_rows(full, sp);
    }
    c.matrix = std::move(full);

    for (int r = 0; r < m; ++r) c.success_modes.push_back(r);
    for (int mode = m; mode < total; ++mode) c.error_modes.push_back(mode);
    return c;
}

PostSelectedRun run_postselected(const EncodedCircuit& circuit, const PhotonicState& input) {
    if (input.modes() != circuit.payload_modes) {
        throw std::invalid_argument("run_postselected: input must live on the payload modes");
    }
    const PhotonicState wide = embed_state(input, circuit.success_modes, circuit.total_modes());
    const PhotonicState evolved = apply(circuit.matrix, wide);
    auto projected = vacuum_project(evolved, circuit.error_modes);
    PhotonicState payload = restrict_modes(projected.state, circuit.success_modes);

    PostSelectedRun run{std::nullopt, payload, projected.norm_sq};
    if (projected.norm_sq > kZeroProbability) run.conditional = payload.normalized();
    return run;
}

double fidelity_vs_target(const PhotonicState& conditional, const ModeMatrix& target,
                          const PhotonicState& input) {
    const PhotonicState ideal = apply(target, input);
    return std::norm(ideal.inner(conditional));
}

// ---------------------------------------------------------------------------
// Encoder-noise scaling

namespace {

AveragingConfig probe_config(const EncoderProbe& probe) {
    AveragingConfig cfg;
    cfg.levels = probe.levels;
    cfg.payload_modes = static_cast<int>(probe.target.rows());
    return cfg;
}

ModeMatrix probe_success(const EncoderProbe& probe, std::span<const double> deltas) {
    const auto cfg = probe_config(probe);
    const std::vector<ModeMatrix> units(static_cast<std::size_t>(cfg.copies()), probe.target);
    return build_tree(cfg, units, deltas).success_block();
}

}  // namespace

std::vector<double> encoder_pattern(const EncoderProbe& probe) {
    const auto cfg = probe_config(probe);
    std::vector<double> w(static_cast<std::size_t>(tree_splitter_count(cfg)));
    SampleStream rng(probe.pattern_seed, 0);
    const auto m = static_cast<std::size_t>(cfg.payload_modes);
    for (std::size_t i = 0; i < w.size(); i += m) {
        for (std::size_t r = 0; r < m; ++r) {
            w[i + r] = (probe.correlated && r > 0) ? w[i] : 2.0 * rng.uniform() - 1.0;
        }
    }
    return w;
}

double encoder_deviation(const EncoderProbe& probe, double delta) {
    auto deltas = encoder_pattern(probe);
    for (auto& d : deltas) d *= delta;
    return (probe_success(probe, deltas) - probe.target).norm();
}

EncoderScaling encoder_error_scaling(const EncoderProbe& probe, std::span<const double> magnitudes) {
    EncoderScaling out;
    for (double delta : magnitudes) out.points.push_back({delta, encoder_deviation(probe, delta)});
    out.slope = loglog_slope(out.points);
    return out;
}

std::vector<double> encoder_first_derivative_norms(const EncoderProbe& probe, double step) {
    const auto cfg = probe_config(probe);
    const auto count = static_cast<std::size_t>(tree_splitter_count(cfg));
    const auto m = static_cast<std::size_t>(cfg.payload_modes);
    const std::size_t stride = probe.correlated ? m : 1;
    std::vector<double> norms;
    for (std::size_t i = 0; i < count; i += stride) {
        std::vector<double> plus(count, 0.0);
        std::vector<double> minus(count, 0.0);
        for (std::size_t r = 0; r < stride; ++r) {
            plus[i + r] = step;
            minus[i + r] = -step;
        }
        const ModeMatrix d = (probe_success(probe, plus) - probe_success(probe, minus)) / (2.0 * step);
        norms.push_back(d.norm());
    }
    return norms;
}

double loglog_slope(std::span<const ScalingPoint> points) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : points) {
        if (!(p.delta > 0.0) || !(p.deviation > 0.0)) continue;
        const double x = std::log(p.delta);
        const double y = std::log(p.deviation);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

}  // namespace uavg
