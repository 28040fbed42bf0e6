#include "uavg/parity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uavg/analytic.hpp"

namespace uavg {

void ParityCode::validate() const {
    if (n < 1 || q < 1) throw std::invalid_argument("ParityCode: n and q must be >= 1");
}

LogicalState LogicalState::normalized(Complex alpha, Complex beta) {
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(norm > 0.0)) throw std::invalid_argument("LogicalState: zero vector");
    return {alpha / norm, beta / norm};
}

LogicalState LogicalState::random(SampleStream& rng) {
    std::normal_distribution<double> g;
    const Complex a(g(rng), g(rng));
    const Complex b(g(rng), g(rng));
    return normalized(a, b);
}

HeraldPattern HeraldPattern::clear(const ParityCode& code) {
    return {std::vector<bool>(static_cast<std::size_t>(code.physical()), false)};
}

HeraldPattern HeraldPattern::from_mask(const ParityCode& code, std::uint64_t mask) {
    HeraldPattern p = clear(code);
    for (int i = 0; i < code.physical(); ++i) p.flags[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    return p;
}

int HeraldPattern::heralds_in_copy(const ParityCode& code, int copy) const {
    int count = 0;
    for (int i = 0; i < code.n; ++i) count += flags[static_cast<std::size_t>(copy * code.n + i)] ? 1 : 0;
    return count;
}

std::vector<int> HeraldPattern::errored_copies(const ParityCode& code) const {
    std::vector<int> out;
    for (int c = 0; c < code.q; ++c)
        if (heralds_in_copy(code, c) > 0) out.push_back(c);
    return out;
}

bool success_criteria(const HeraldPattern& pattern, const ParityCode& code) {
    code.validate();
    if (static_cast<int>(pattern.flags.size()) != code.physical()) {
        throw std::invalid_argument("success_criteria: pattern length must be n*q");
    }
    int errored = 0;
    for (int c = 0; c < code.q; ++c) {
        const int h = pattern.heralds_in_copy(code, c);
        if (h == code.n) return false;
        if (h > 0) ++errored;
    }
    return errored <= code.q - 1;
}

double logical_success_prob(const ParityCode& code, const LossModel& loss) {
    code.validate();
    if (!(loss.p >= 0.0 && loss.p <= 1.0)) throw std::invalid_argument("logical_success_prob: p must be in [0, 1]");
    return logical_success_closed<double>(code.n, code.q, loss.p);
}

double herald_prob_from_ua(double nu, double n, int depth) {
    if (depth < 1) throw std::invalid_argument("herald_prob_from_ua: depth must be >= 1");
    return 1.0 - ps_first_order(depth * nu, n);
}

RailAmplitudes random_rail_amplitudes(SampleStream& rng) {
    std::normal_distribution<double> g;
    const Complex dh(g(rng), g(rng));
    const Complex dv(g(rng), g(rng));
    return {dh, dv};
}

namespace {

// Amplitude of the normalised parity word x (of `bits` bits) in |0>^(bits)
// (odd = false) or |1>^(bits) (odd = true).
double parity_amplitude(std::uint64_t x, int bits, bool odd) {
    const bool is_odd = std::popcount(x) % 2 == 1;
    if (is_odd != odd) return 0.0;
    return std::sqrt(2.0) * std::pow(2.0, -0.5 * bits);
}

// Big-endian qubit register: position p is bit (size - 1 - p) of the index.
struct Register {
    std::vector<Complex> amps;
    std::vector<int> labels;

    int size() const { return static_cast<int>(labels.size()); }
    int position(int label) const {
        for (int p = 0; p < size(); ++p)
            if (labels[static_cast<std::size_t>(p)] == label) return p;
        throw std::logic_error("Register: label not present");
    }

    void apply(int label, const Matrix2c& u) {
        const int shift = size() - 1 - position(label);
        const std::uint64_t bit = std::uint64_t{1} << shift;
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            if (i & bit) continue;
            const Complex a0 = amps[i], a1 = amps[i | bit];
            amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
            amps[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }

    // Removes `label`, weighting its |0> and |1> components by c0 and c1.
    void contract(int label, Complex c0, Complex c1) {
        const int pos = position(label);
        const int shift = size() - 1 - pos;
        const std::uint64_t low = (std::uint64_t{1} << shift) - 1;
        std::vector<Complex> out(amps.size() / 2);
        for (std::uint64_t y = 0; y < out.size(); ++y) {
            const std::uint64_t i0 = ((y & ~low) << 1) | (y & low);
            out[y] = c0 * amps[i0] + c1 * amps[i0 | (low + 1)];
        }
        amps = std::move(out);
        labels.erase(labels.begin() + pos);
    }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }

    void scale(double f) {
        for (auto& a : amps) a *= f;
    }
};

// alpha |0>^(n) ... + sign beta |1>^(n) ... over `copies` blocks of n qubits.
Register encoded(int n, int copies, Complex alpha, Complex beta, const std::vector<int>& labels) {
    const int m = n * copies;
    Register r;
    r.labels = labels;
    r.amps.assign(std::size_t{1} << m, Complex{});
    const std::uint64_t block_mask = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t x = 0; x < r.amps.size(); ++x) {
        double zero = 1.0, one = 1.0;
        for (int c = 0; c < copies; ++c) {
            const std::uint64_t block = (x >> ((copies - 1 - c) * n)) & block_mask;
            zero *= parity_amplitude(block, n, false);
            one *= parity_amplitude(block, n, true);
        }
        r.amps[x] = alpha * zero + beta * one;
    }
    return r;
}

Eigen::Vector2cd plus_minus(int sign) {
    const double h = std::sqrt(0.5);
    return Eigen::Vector2cd(h, sign > 0 ? h : -h);
}

}  // namespace

HeraldedBranchAmplitudes branch_amplitudes(const std::vector<RailAmplitudes>& heralded) {
    const int j = static_cast<int>(heralded.size());
    if (j == 0 || j > 20) throw std::invalid_argument("branch_amplitudes: need 1..20 heralded qubits");
    HeraldedBranchAmplitudes out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << j); ++x) {
        Complex w{1.0, 0.0};
        for (int i = 0; i < j; ++i) {
            const bool bit = (x >> (j - 1 - i)) & 1u;
            const auto& r = heralded[static_cast<std::size_t>(i)];
            w *= bit ? -r.dv : r.dh;
        }
        out.delta_theta += w * parity_amplitude(x, j, false);
        out.delta_phi += w * parity_amplitude(x, j, true);
    }
    const Complex rel = std::conj(out.delta_theta) * out.delta_phi;
    out.relative_sign = rel.real() >= 0.0 ? 1 : -1;
    return out;
}

Eigen::Vector2cd ua_qubit_channel(bool herald, const Matrix2c& u_target, const RailAmplitudes& rails,
                                  const Eigen::Vector2cd& qubit) {
    if (!herald) return u_target * qubit;
    return Eigen::Vector2cd(rails.dh * qubit(0), -rails.dv * qubit(1));
}

VerifyReport statevector_verify(const VerifyCase& c, double tol) {
    const ParityCode& code = c.code;
    code.validate();
    const int m = code.physical();
    if (m > 16) throw std::invalid_argument("statevector_verify: n*q must be <= 16");
    if (!success_criteria(c.pattern, code)) {
        throw std::invalid_argument("statevector_verify: herald pattern violates the success criteria");
    }
    const auto errored = c.pattern.errored_copies(code);
    if (c.outcomes.size() != errored.size()) {
        throw std::invalid_argument("statevector_verify: need one outcome per errored copy");
    }
    if (static_cast<int>(c.rails.size()) != m) throw std::invalid_argument("statevector_verify: need n*q rail entries");
    for (int s : c.outcomes)
        if (s != 1 && s != -1) throw std::invalid_argument("statevector_verify: outcomes must be +1 or -1");

    VerifyReport report;
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
    Register reg = encoded(code.n, code.q, c.logical.alpha, c.logical.beta, all);

    for (int i = 0; i < m; ++i) {
        if (c.pattern.flags[static_cast<std::size_t>(i)]) {
            const auto& r = c.rails[static_cast<std::size_t>(i)];
            reg.contract(i, r.dh, -r.dv);
        } else {
            reg.apply(i, c.u_target);
        }
    }

    // First survivor of each errored copy, measured copy by copy.
    std::vector<int> measured;
    for (std::size_t e = 0; e < errored.size(); ++e) {
        const int copy = errored[e];
        int survivor = -1;
        for (int i = 0; i < code.n && survivor < 0; ++i)
            if (!c.pattern.flags[static_cast<std::size_t>(copy * code.n + i)]) survivor = copy * code.n + i;
        const Eigen::Vector2cd v = c.u_target * plus_minus(c.outcomes[e]);
        reg.contract(survivor, std::conj(v(0)), std::conj(v(1)));
        measured.push_back(survivor);
        report.logical_sign *= c.outcomes[e];
        const double nsq = reg.norm_sq();
        if (!(nsq > 1e-24)) {
            report.outcome_possible = false;
            report.message = "outcome " + std::to_string(c.outcomes[e]) + " on copy " + std::to_string(copy) +
                             " has zero probability";
            report.remaining = reg.labels;
            return report;
        }
        reg.scale(1.0 / std::sqrt(nsq));
    }
    report.remaining = reg.labels;
    report.actual = reg.amps;

    // Expected register: clean copies carry the corrected logical state,
    // survivors of errored copies are left in u_T|s>.
    std::vector<int> clean_labels;
    std::vector<int> clean_copies;
    for (int copy = 0; copy < code.q; ++copy) {
        if (c.pattern.heralds_in_copy(code, copy) > 0) continue;
        clean_copies.push_back(copy);
        for (int i = 0; i < code.n; ++i) clean_labels.push_back(copy * code.n + i);
    }
    Register clean = encoded(code.n, static_cast<int>(clean_copies.size()), c.logical.alpha,
                             static_cast<double>(report.logical_sign) * c.logical.beta, clean_labels);
    for (int label : clean_labels) clean.apply(label, c.u_target);

    const int r = reg.size();
    report.expected.assign(reg.amps.size(), Complex{});
    for (std::uint64_t x = 0; x < reg.amps.size(); ++x) {
        Complex amp{1.0, 0.0};
        std::uint64_t clean_index = 0;
        for (int p = 0; p < r; ++p) {
            const int label = reg.labels[static_cast<std::size_t>(p)];
            const int bit = static_cast<int>((x >> (r - 1 - p)) & 1u);
            const int copy = label / code.n;
            const auto it = std::find(errored.begin(), errored.end(), copy);
            if (it == errored.end()) {
                clean_index = (clean_index << 1) | static_cast<std::uint64_t>(bit);
            } else {
                const int s = c.outcomes[static_cast<std::size_t>(it - errored.begin())];
                amp *= (c.u_target * plus_minus(s))(bit);
            }
        }
        report.expected[x] = amp * clean.amps[clean_index];
    }

    Complex overlap{};
    for (std::size_t i = 0; i < report.actual.size(); ++i) overlap += std::conj(report.expected[i]) * report.actual[i];
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
    for (std::size_t i = 0; i < report.actual.size(); ++i) {
        report.max_deviation = std::max(report.max_deviation, std::abs(report.actual[i] - phase * report.expected[i]));
    }
    report.passed = report.max_deviation <= tol;
    if (!report.passed) {
        report.message = "register deviates from the predicted state by " + std::to_string(report.max_deviation);
    }
    return report;
}

}  // namespace uavg
