#pragma once

// Loss-tolerant (n, q) parity code fed by unitary-averaged physical gates.
//
// Physical qubit (copy c, position i) has index c * n + i. Logical states are
// |0>^(n) = (|+>^n + |->^n)/sqrt2 (even-parity words) and |1>^(n) the
// odd-parity counterpart, repeated over q copies.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavg/gates.hpp"
#include "uavg/random.hpp"

namespace uavg {

struct ParityCode {
    int n = 1;  // qubits per parity block
    int q = 1;  // redundant copies

    int physical() const { return n * q; }
    void validate() const;
};

struct LogicalState {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};

    /// Rescales (alpha, beta) to unit norm; throws on the zero vector.
    static LogicalState normalized(Complex alpha, Complex beta);
    static LogicalState random(SampleStream& rng);
};

struct HeraldPattern {
    std::vector<bool> flags;  // true: photon seen in an error mode

    static HeraldPattern clear(const ParityCode& code);
    static HeraldPattern from_mask(const ParityCode& code, std::uint64_t mask);

    int heralds_in_copy(const ParityCode& code, int copy) const;
    std::vector<int> errored_copies(const ParityCode& code) const;
};

struct LossModel {
    double p = 0.0;  // per-physical-qubit herald probability
};

/// (1) at most q-1 copies carry a herald and (2) every heralded copy keeps at
/// least one unheralded qubit.
bool success_criteria(const HeraldPattern& pattern, const ParityCode& code);

/// Closed form (c + s)^q - s^q with c = (1-p)^n, s = 1 - c - p^n.
template <class T>
T logical_success_closed(int n, int q, const T& p) {
    T c = 1, pn = 1;
    for (int i = 0; i < n; ++i) {
        c *= (1 - p);
        pn *= p;
    }
    const T s = 1 - c - pn;
    T cs = 1, sq = 1;
    for (int i = 0; i < q; ++i) {
        cs *= (c + s);
        sq *= s;
    }
    return cs - sq;
}

/// Sum over all 2^(n q) herald patterns that satisfy the criteria.
template <class T>
T logical_success_enumerated(const ParityCode& code, const T& p) {
    code.validate();
    const int m = code.physical();
    if (m > 16) throw std::invalid_argument("logical_success_enumerated: n*q must be <= 16");
    T total = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (!success_criteria(HeraldPattern::from_mask(code, mask), code)) continue;
        T w = 1;
        for (int i = 0; i < m; ++i) w *= ((mask >> i) & 1u) ? p : T(1 - p);
        total += w;
    }
    return total;
}

double logical_success_prob(const ParityCode& code, const LossModel& loss);

/// 1 - P_s at first order with characteristic noise d * nu: d nu (1 - 1/N).
double herald_prob_from_ua(double nu, double n, int depth);

/// Stochastic factors of the heralded branch of one copy.
struct HeraldedBranchAmplitudes {
    Complex delta_theta;  // heralded qubits contracted with |0>^(J)
    Complex delta_phi;    // ... with |1>^(J)
    /// Sign of delta_phi relative to delta_theta once both are renormalised
    /// to unit modulus (real part of the relative phase).
    int relative_sign = 1;
};

/// Per-rail herald amplitudes (dH, dV) of one physical qubit.
struct RailAmplitudes {
    Complex dh;
    Complex dv;
};

RailAmplitudes random_rail_amplitudes(SampleStream& rng);

/// delta-Theta and delta-Phi for J heralded qubits with the given rail factors.
HeraldedBranchAmplitudes branch_amplitudes(const std::vector<RailAmplitudes>& heralded);

/// No herald: u_target |psi>. Herald: the per-rail amplitudes routed to the
/// error modes, (dH psi_H, -dV psi_V), unnormalised; their sum is the
/// amplitude of detecting the photon.
Eigen::Vector2cd ua_qubit_channel(bool herald, const Matrix2c& u_target, const RailAmplitudes& rails,
                                  const Eigen::Vector2cd& qubit);

struct VerifyCase {
    ParityCode code;
    HeraldPattern pattern;
    Matrix2c u_target = Matrix2c::Identity();
    LogicalState logical;
    /// +1 / -1 per errored copy, in increasing copy order.
    std::vector<int> outcomes;
    /// One entry per physical qubit; only heralded ones are read.
    std::vector<RailAmplitudes> rails;
};

struct VerifyReport {
    bool passed = false;
    bool outcome_possible = true;
    int logical_sign = 1;        // product of outcomes
    double max_deviation = 0.0;  // after removing the global phase
    std::vector<int> remaining;  // physical labels of the output register
    std::vector<Complex> actual;
    std::vector<Complex> expected;
    std::string message;
};

/// Builds the encoded register, applies the per-qubit channels, projects the
/// heralds, measures the first survivor of every errored copy in the
/// u_target|+/-> basis (copy by copy) and compares the renormalised register
/// with (u_T|s>)^(k-1) per errored copy times u_T^(clean) (alpha|0..> + S beta|1..>)
/// up to a global phase, S being the product of outcomes.
VerifyReport statevector_verify(const VerifyCase& c, double tol = 1e-10);

}  // namespace uavg
