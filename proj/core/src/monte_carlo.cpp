#include "uavg/monte_carlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "uavg/analytic.hpp"
#include "uavg/table.hpp"

namespace uavg {

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::ratio_of_means: return "ratio-of-means";
        case Estimator::mean_of_ratios: return "mean-of-ratios";
        case Estimator::coherent_amplitude: return "coherent";
    }
    return "?";
}

Estimator parse_estimator(std::string_view name) {
    if (name == "ratio-of-means") return Estimator::ratio_of_means;
    if (name == "mean-of-ratios") return Estimator::mean_of_ratios;
    if (name == "coherent") return Estimator::coherent_amplitude;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

const McEstimate& McResult::fidelity(Estimator e) const {
    switch (e) {
        case Estimator::ratio_of_means: return ratio_of_means;
        case Estimator::mean_of_ratios: return mean_of_ratios;
        case Estimator::coherent_amplitude: return coherent;
    }
    return ratio_of_means;
}

PhotonicState default_input(const GateSpec& spec) {
    if (family_of(spec) == GateFamily::single_qubit) return PhotonicState::basis(FockOccupation::single(2, 0));
    return PhotonicState::basis(FockOccupation::pair(4, 0, 2));
}

namespace {

// Streaming mean and co-moment of K variables; merge follows Chan et al.
template <int K>
struct Moments {
    std::uint64_t n = 0;
    double mean[K]{};
    double comoment[K][K]{};

    void add(const double (&x)[K]) {
        ++n;
        double d[K];
        for (int i = 0; i < K; ++i) {
            d[i] = x[i] - mean[i];
            mean[i] += d[i] / static_cast<double>(n);
        }
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) comoment[i][j] += d[i] * (x[j] - mean[j]);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
        double d[K];
        for (int i = 0; i < K; ++i) d[i] = o.mean[i] - mean[i];
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) comoment[i][j] += o.comoment[i][j] + d[i] * d[j] * na * nb / nt;
        for (int i = 0; i < K; ++i) mean[i] += d[i] * nb / nt;
        n += o.n;
    }

    double cov(int i, int j) const { return n > 1 ? comoment[i][j] / static_cast<double>(n - 1) : 0.0; }
};

// P_s, |x|^2, Re x, Im x with x = <Psi|out>.
enum { kP, kX2, kRe, kIm };

struct Accumulator {
    Moments<4> main;
    Moments<1> ratio;
    std::uint64_t excluded = 0;

    void add(double p, Complex x) {
        const double x2 = std::norm(x);
        main.add({p, x2, x.real(), x.imag()});
        if (p > 0.0) ratio.add({x2 / p});
        else ++excluded;
    }

    void merge(const Accumulator& o) {
        main.merge(o.main);
        ratio.merge(o.ratio);
        excluded += o.excluded;
    }
};

McEstimate delta_method(const Moments<4>& m, const double (&grad)[4], double value) {
    double var = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) var += grad[i] * grad[j] * m.cov(i, j);
    const double n = static_cast<double>(m.n);
    return {value, m.n > 1 ? std::sqrt(std::max(var, 0.0) / n) : 0.0, m.n, 0};
}

McResult summarise(const Accumulator& acc) {
    const auto& m = acc.main;
    McResult r;
    const double n = static_cast<double>(m.n);
    const double mp = m.mean[kP];
    r.ps = {mp, m.n > 1 ? std::sqrt(m.cov(kP, kP) / n) : 0.0, m.n, 0};

    if (mp > 0.0) {
        const double f = m.mean[kX2] / mp;
        const double g[4] = {-f / mp, 1.0 / mp, 0.0, 0.0};
        r.ratio_of_means = delta_method(m, g, f);

        const double a = m.mean[kRe], b = m.mean[kIm];
        const double fc = (a * a + b * b) / mp;
        const double gc[4] = {-fc / mp, 0.0, 2.0 * a / mp, 2.0 * b / mp};
        r.coherent = delta_method(m, gc, fc);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.ratio_of_means = r.coherent = {nan, nan, m.n, 0};
    }

    const auto& q = acc.ratio;
    r.mean_of_ratios = {q.n ? q.mean[0] : std::numeric_limits<double>::quiet_NaN(),
                        q.n > 1 ? std::sqrt(q.cov(0, 0) / static_cast<double>(q.n)) : 0.0, q.n, acc.excluded};
    return r;
}

// Evaluates `sample(i, acc)` for i in [0, samples) with block-ordered merging.
template <class Fn>
Accumulator reduce_samples(const McConfig& cfg, Fn sample) {
    if (cfg.samples == 0) throw std::invalid_argument("Monte Carlo: samples must be >= 1");
    const std::uint64_t block = std::max<std::uint64_t>(cfg.block_size, 1);
    const std::uint64_t blocks = (cfg.samples + block - 1) / block;
    std::vector<Accumulator> partial(blocks);

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
                const std::uint64_t lo = b * block, hi = std::min(cfg.samples, lo + block);
                Accumulator acc;
                for (std::uint64_t i = lo; i < hi; ++i) sample(i, acc);
                partial[b] = acc;
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(blocks);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Accumulator total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

void check_copies(int copies) {
    if (copies < 1 || (copies & (copies - 1)) != 0) {
        throw std::invalid_argument("Monte Carlo: N must be a power of two, got " + std::to_string(copies));
    }
}

// Dense view of a 1- or 2-photon payload state over M modes.
//   1 photon: amplitude vector v, out = A v.
//   2 photons: coefficient matrix W with a_a^dag a_b^dag weights (a <= b,
//   doubly occupied modes carrying 1/sqrt2), out = A W A^T read back into
//   Fock amplitudes.
template <int M>
struct DenseInput {
    using Vec = Eigen::Matrix<Complex, M, 1>;
    using Mat = Eigen::Matrix<Complex, M, M>;

    int photons = 1;
    Vec v = Vec::Zero();
    Mat w = Mat::Zero();

    explicit DenseInput(const PhotonicState& s) : photons(s.photon_number()) {
        if (s.modes() != M) throw std::invalid_argument("Monte Carlo: input state has the wrong number of modes");
        for (const auto& [occ, amp] : s.terms()) {
            const auto modes = occ.occupied_modes();
            if (photons == 1) {
                v(modes[0]) += amp;
            } else if (modes[0] == modes[1]) {
                w(modes[0], modes[0]) += amp / std::sqrt(2.0);
            } else {
                w(modes[0], modes[1]) += amp;
            }
        }
    }

    // Output amplitudes as a flat vector in a fixed basis order.
    Eigen::Matrix<Complex, M*(M + 1) / 2, 1> out2(const Mat& a) const {
        const Mat s = a * w * a.transpose();
        Eigen::Matrix<Complex, M*(M + 1) / 2, 1> o;
        int k = 0;
        for (int i = 0; i < M; ++i) {
            o(k++) = std::sqrt(2.0) * s(i, i);
            for (int j = i + 1; j < M; ++j) o(k++) = s(i, j) + s(j, i);
        }
        return o;
    }
};

template <int M>
using FixedMatrix = Eigen::Matrix<Complex, M, M>;

template <int M, class Draw>
Accumulator ensemble(const PhotonicState& input, const FixedMatrix<M>& target, int copies, const McConfig& cfg,
                     Draw draw) {
    const DenseInput<M> in(input);
    const double in_norm = std::sqrt(input.norm_sq());

    typename DenseInput<M>::Vec ideal1;
    Eigen::Matrix<Complex, M*(M + 1) / 2, 1> ideal2;
    if (in.photons == 1) {
        ideal1 = target * in.v / in_norm;
    } else {
        ideal2 = in.out2(target) / in_norm;
    }

    return reduce_samples(cfg, [&](std::uint64_t i, Accumulator& acc) {
        SampleStream rng(cfg.master_seed, i);
        FixedMatrix<M> units[64];
        std::vector<FixedMatrix<M>> spill;
        FixedMatrix<M>* u = units;
        if (copies > 64) {
            spill.resize(static_cast<std::size_t>(copies));
            u = spill.data();
        }
        for (int j = 0; j < copies; ++j) u[j] = draw(rng);
        // Pairwise so identical copies average exactly.
        for (int s = 1; s < copies; s *= 2)
            for (int j = 0; j + s < copies; j += 2 * s) u[j] += u[j + s];
        const FixedMatrix<M> avg = u[0] / static_cast<double>(copies);

        if (in.photons == 1) {
            const auto out = (avg * in.v / in_norm).eval();
            acc.add(out.squaredNorm(), ideal1.dot(out));
        } else {
            const auto out = (in.out2(avg) / in_norm).eval();
            acc.add(out.squaredNorm(), ideal2.dot(out));
        }
    });
}

Accumulator dispatch(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg) {
    check_copies(copies);
    noise.validate();
    const PhotonicState input = cfg.input_state ? *cfg.input_state : default_input(spec);
    if (input.norm_sq() <= 0.0) throw std::invalid_argument("Monte Carlo: input state has zero norm");

    if (const auto* g = std::get_if<GateParams>(&spec)) {
        return ensemble<2>(input, single_qubit_matrix2(*g), copies, cfg,
                           [&](SampleStream& rng) { return single_qubit_matrix2(sample_noisy(*g, noise, rng).sampled()); });
    }
    if (const auto* f = std::get_if<FourModeParams>(&spec)) {
        return ensemble<4>(input, four_mode_matrix4(*f), copies, cfg,
                           [&](SampleStream& rng) { return four_mode_matrix4(sample_noisy(*f, noise, rng)); });
    }
    const auto& t = std::get<FusionParams>(spec);
    return ensemble<4>(input, fusion_type2_matrix4(t), copies, cfg,
                       [&](SampleStream& rng) { return fusion_type2_matrix4(sample_noisy(t, noise, rng)); });
}

}  // namespace

McResult run_ensemble(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg) {
    return summarise(dispatch(spec, noise, copies, cfg));
}

McEstimate estimate_ps(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg) {
    return run_ensemble(spec, noise, copies, cfg).ps;
}

McEstimate estimate_fidelity(const GateSpec& spec, const NoiseSpec& noise, int copies, const McConfig& cfg) {
    return run_ensemble(spec, noise, copies, cfg).fidelity(cfg.estimator);
}

McResult estimate_end_to_end(const AveragingConfig& config, const GateSpec& spec, const McConfig& cfg) {
    config.validate();
    if (config.levels > 3) throw std::invalid_argument("estimate_end_to_end: at most 3 levels");
    if (config.payload_modes != mode_count(spec)) {
        throw std::invalid_argument("estimate_end_to_end: payload width does not match the gate");
    }
    const PhotonicState input = cfg.input_state ? *cfg.input_state : default_input(spec);
    const ModeMatrix target = target_matrix(spec);
    const PhotonicState ideal = apply(target, input).scaled(1.0 / std::sqrt(input.norm_sq()));
    const PhotonicState in = input.scaled(1.0 / std::sqrt(input.norm_sq()));
    const int copies = config.copies();

    const auto acc = reduce_samples(cfg, [&](std::uint64_t i, Accumulator& a) {
        SampleStream rng(cfg.master_seed, i);
        SampleStream encoder_rng = rng.fork(0xE4C0DE);
        std::vector<ModeMatrix> units;
        units.reserve(static_cast<std::size_t>(copies));
        for (int j = 0; j < copies; ++j) units.push_back(sample_matrix(spec, config.gate_noise, rng));
        const auto deltas = sample_encoder_deltas(config, encoder_rng);
        const EncodedCircuit circuit = build_tree(config, units, deltas);
        const PostSelectedRun run = run_postselected(circuit, in);
        a.add(run.success_probability, ideal.inner(run.unnormalized));
    });
    return summarise(acc);
}

FusionEstimate estimate_fusion(GateFamily kind, const NoiseSpec& noise, int copies, const McConfig& cfg) {
    GateSpec spec;
    switch (kind) {
        case GateFamily::four_mode: spec = FourModeParams::type2_compatible(); break;
        case GateFamily::type2: spec = FusionParams{}; break;
        default: throw std::invalid_argument("estimate_fusion: expects the four-mode or type2 family");
    }
    const McResult r = run_ensemble(spec, noise, copies, cfg);
    return {r.ps, r.fidelity(cfg.estimator)};
}

// ---------------------------------------------------------------------------
// Discrimination

std::vector<Hypothesis> printed_hypotheses(GateFamily family) {
    switch (family) {
        case GateFamily::single_qubit:
            return {{"main-text", {4.5, -4.5, 0.0}},
                    {"appendix-2nd-order", {2.25, 3.0, 0.0}},
                    {"appendix-4th-order", {4.0, -4.0, 0.0}}};
        case GateFamily::type2:
            return {{"main-text", {2.0, -2.0, 0.0}}, {"appendix", {5.0 / 3.0, -5.0 / 3.0, 0.0}}};
        case GateFamily::four_mode:
            return {{"printed-inverse-square", {18.0, 0.0, -18.0}}, {"inverse-linear", {18.0, -18.0, 0.0}}};
    }
    return {};
}

DiscriminationReport discriminate(GateFamily family, std::vector<DiscriminationPoint> points, double stderr_floor) {
    if (points.empty()) throw std::invalid_argument("discriminate: no points");
    const int depth = family == GateFamily::single_qubit ? 3 : family == GateFamily::four_mode ? 6 : 2;

    Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& p : points) {
        if (!(p.nu > 0.0)) throw std::invalid_argument("discriminate: every nu must be > 0");
        const double nu2 = p.nu * p.nu;
        const double y = (p.mean - ps_first_order(depth * p.nu, p.copies)) / nu2;
        const double sigma = std::max(p.std_error, stderr_floor) / nu2;
        const double inv = 1.0 / p.copies;
        const Eigen::Vector3d x(1.0, inv, inv * inv);
        info += x * x.transpose() / (sigma * sigma);
        rhs += x * y / (sigma * sigma);
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
    if (lu.rank() < 3) throw std::invalid_argument("discriminate: need at least three distinct N values");
    const Eigen::Vector3d c = lu.solve(rhs);
    const Eigen::Matrix3d cov = lu.inverse();

    DiscriminationReport report;
    report.family = family;
    report.points = std::move(points);
    report.fit = {c(0), c(1), c(2)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) report.covariance[i][j] = cov(i, j);

    for (const auto& h : printed_hypotheses(family)) {
        const Eigen::Vector3d d = c - Eigen::Vector3d(h.coefficients.c0, h.coefficients.c1, h.coefficients.c2);
        report.scores.push_back({h.name, d.dot(info * d)});
    }
    std::stable_sort(report.scores.begin(), report.scores.end(),
                     [](const auto& a, const auto& b) { return a.distance_sq < b.distance_sq; });
    report.selected = report.scores.front().name;
    report.margin = report.scores.size() > 1 ? report.scores[1].distance_sq - report.scores[0].distance_sq
                                             : std::numeric_limits<double>::infinity();
    return report;
}

std::string DiscriminationReport::to_text() const {
    std::ostringstream os;
    os << "family," << to_string(family) << '\n';
    os << "nu,N,mean,stderr\n";
    for (const auto& p : points) {
        os << format_double(p.nu) << ',' << p.copies << ',' << format_double(p.mean) << ','
           << format_double(p.std_error) << '\n';
    }
    os << "fit_c0," << format_double(fit.c0) << '\n';
    os << "fit_c1," << format_double(fit.c1) << '\n';
    os << "fit_c2," << format_double(fit.c2) << '\n';
    os << "stderr_c0," << format_double(std::sqrt(covariance[0][0])) << '\n';
    os << "stderr_c1," << format_double(std::sqrt(covariance[1][1])) << '\n';
    os << "stderr_c2," << format_double(std::sqrt(covariance[2][2])) << '\n';
    for (const auto& s : scores) os << "distance_sq:" << s.name << ',' << format_double(s.distance_sq) << '\n';
    os << "selected," << selected << '\n';
    os << "margin," << format_double(margin) << '\n';
    return os.str();
}

namespace {

NoiseSpec with_variance(const NoiseSpec& tmpl, double nu) {
    switch (tmpl.kind) {
        case NoiseKind::gaussian: return NoiseSpec::gaussian(nu);
        case NoiseKind::uniform: return NoiseSpec::uniform(nu);
        case NoiseKind::four_moment: {
            const double kurtosis = tmpl.variance > 0.0 ? tmpl.fourth_moment / (tmpl.variance * tmpl.variance) : 1.0;
            return NoiseSpec::four_moment(nu, kurtosis * nu * nu);
        }
    }
    return NoiseSpec::gaussian(nu);
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t cell) { return SampleStream(master_seed, cell)(); }

DiscriminationReport variant_discrimination(const GateSpec& spec, const NoiseSpec& noise_template,
                                            const std::vector<double>& nu_grid, const std::vector<int>& copies_grid,
                                            const McConfig& cfg) {
    std::vector<DiscriminationPoint> points;
    std::uint64_t cell = 0;
    for (double nu : nu_grid) {
        for (int n : copies_grid) {
            McConfig c = cfg;
            c.master_seed = cell_seed(cfg.master_seed, cell++);
            const McEstimate e = estimate_ps(spec, with_variance(noise_template, nu), n, c);
            points.push_back({nu, n, e.mean, e.std_error});
        }
    }
    return discriminate(family_of(spec), std::move(points));
}

}  // namespace uavg
