#include "uavg/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace uavg {

namespace {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_indices(std::span<const int> indices, int total, const char* what) {
    std::vector<bool> seen(static_cast<std::size_t>(std::max(total, 0)), false);
    for (int idx : indices) {
        if (idx < 0 || idx >= total) {
            throw std::out_of_range(std::string(what) + ": mode index " + std::to_string(idx) +
                                    " outside [0, " + std::to_string(total) + ")");
        }
        if (seen[static_cast<std::size_t>(idx)]) {
            throw std::invalid_argument(std::string(what) + ": repeated mode index " +
                                        std::to_string(idx));
        }
        seen[static_cast<std::size_t>(idx)] = true;
    }
}

}  // namespace

bool is_unitary(const ModeMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const ModeMatrix gram = m.adjoint() * m;
    return max_abs_diff(gram, ModeMatrix::Identity(m.rows(), m.cols())) <= tol;
}

double max_abs_diff(const ModeMatrix& a, const ModeMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// FockOccupation

FockOccupation::FockOccupation(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
        if (c < 0) throw std::invalid_argument("FockOccupation: negative photon count");
    }
}

FockOccupation FockOccupation::single(int modes, int mode) {
    if (mode < 0 || mode >= modes) throw std::out_of_range("FockOccupation::single: bad mode");
    std::vector<int> c(static_cast<std::size_t>(modes), 0);
    c[static_cast<std::size_t>(mode)] = 1;
    return FockOccupation(std::move(c));
}

FockOccupation FockOccupation::pair(int modes, int a, int b) {
    if (a < 0 || a >= modes || b < 0 || b >= modes) {
        throw std::out_of_range("FockOccupation::pair: bad mode");
    }
    std::vector<int> c(static_cast<std::size_t>(modes), 0);
    ++c[static_cast<std::size_t>(a)];
    ++c[static_cast<std::size_t>(b)];
    return FockOccupation(std::move(c));
}

int FockOccupation::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

std::vector<int> FockOccupation::occupied_modes() const {
    std::vector<int> out;
    for (int i = 0; i < modes(); ++i) {
        for (int k = 0; k < counts_[static_cast<std::size_t>(i)]; ++k) out.push_back(i);
    }
    return out;
}

std::string FockOccupation::to_string() const {
    std::ostringstream os;
    os << '|';
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (i) os << ',';
        os << counts_[i];
    }
    os << '>';
    return os.str();
}

// ---------------------------------------------------------------------------
// PhotonicState

PhotonicState::PhotonicState(int modes, int photon_number) : modes_(modes), photons_(photon_number) {
    if (modes < 1) throw std::invalid_argument("PhotonicState: need at least one mode");
    if (photon_number != 1 && photon_number != 2) {
        throw std::invalid_argument("PhotonicState: photon number must be 1 or 2");
    }
}

PhotonicState PhotonicState::from_amplitudes(std::span<const Complex> amps) {
    PhotonicState s(static_cast<int>(amps.size()), 1);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (amps[i] != Complex{}) s.add(FockOccupation::single(s.modes_, static_cast<int>(i)), amps[i]);
    }
    return s;
}

PhotonicState PhotonicState::from_amplitudes(const AmplitudeVector& amps) {
    return from_amplitudes(std::span<const Complex>(amps.data(), static_cast<std::size_t>(amps.size())));
}

PhotonicState PhotonicState::basis(const FockOccupation& occ) {
    PhotonicState s(occ.modes(), occ.total());
    s.add(occ, 1.0);
    return s;
}

void PhotonicState::add(const FockOccupation& occ, Complex amp) {
    if (occ.modes() != modes_) throw std::invalid_argument("PhotonicState::add: mode count mismatch");
    if (occ.total() != photons_) {
        throw std::invalid_argument("PhotonicState::add: photon number mismatch");
    }
    if (!is_finite(amp)) throw std::domain_error("PhotonicState::add: non-finite amplitude");
    terms_[occ] += amp;
}

Complex PhotonicState::amplitude(const FockOccupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? Complex{} : it->second;
}

double PhotonicState::norm_sq() const {
    double acc = 0.0;
    for (const auto& [occ, amp] : terms_) acc += std::norm(amp);
    return acc;
}

bool PhotonicState::is_normalized(double tol) const { return std::abs(norm_sq() - 1.0) <= tol; }

PhotonicState PhotonicState::normalized() const {
    const double n = norm_sq();
    if (!(n > 0.0)) throw std::domain_error("PhotonicState::normalized: zero-norm state");
    return scaled(1.0 / std::sqrt(n));
}

PhotonicState PhotonicState::scaled(Complex factor) const {
    PhotonicState out(modes_, photons_);
    for (const auto& [occ, amp] : terms_) out.terms_.emplace(occ, amp * factor);
    return out;
}

AmplitudeVector PhotonicState::single_photon_amplitudes() const {
    if (photons_ != 1) {
        throw std::logic_error("single_photon_amplitudes: state carries two photons");
    }
    AmplitudeVector v = AmplitudeVector::Zero(modes_);
    for (const auto& [occ, amp] : terms_) v(occ.occupied_modes().front()) += amp;
    return v;
}

Complex PhotonicState::inner(const PhotonicState& other) const {
    if (other.modes_ != modes_ || other.photons_ != photons_) {
        throw std::invalid_argument("PhotonicState::inner: incompatible states");
    }
    Complex acc{};
    for (const auto& [occ, amp] : terms_) acc += std::conj(amp) * other.amplitude(occ);
    return acc;
}

double PhotonicState::distance(const PhotonicState& other) const {
    if (other.modes_ != modes_ || other.photons_ != photons_) {
        throw std::invalid_argument("PhotonicState::distance: incompatible states");
    }
    double worst = 0.0;
    for (const auto& [occ, amp] : terms_) worst = std::max(worst, std::abs(amp - other.amplitude(occ)));
    for (const auto& [occ, amp] : other.terms_) {
        if (!terms_.contains(occ)) worst = std::max(worst, std::abs(amp));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Evolution

PhotonicState apply_single_photon(const ModeMatrix& m, const PhotonicState& s) {
    if (s.photon_number() != 1) throw std::invalid_argument("apply_single_photon: expected one photon");
    if (m.rows() != m.cols() || m.rows() != s.modes()) {
        throw std::invalid_argument("apply_single_photon: dimension mismatch");
    }
    const AmplitudeVector out = m * s.single_photon_amplitudes();
    return PhotonicState::from_amplitudes(out);
}

PhotonicState apply_two_photon(const ModeMatrix& m, const PhotonicState& s) {
    if (s.photon_number() != 2) throw std::invalid_argument("apply_two_photon: expected two photons");
    if (m.rows() != m.cols() || m.rows() != s.modes()) {
        throw std::invalid_argument("apply_two_photon: dimension mismatch");
    }
    const int dim = s.modes();
    const double sqrt2 = std::sqrt(2.0);

    // |1_k 1_l> = a_k^+ a_l^+ |0>, |2_k> = (a_k^+)^2 / sqrt2 |0>. Each creation
    // operator maps to a column of m; a_i^+ a_j^+ |0> folds back to |1_i 1_j>
    // for i != j and to sqrt2 |2_i> for i == j.
    Eigen::MatrixXcd pair_amps = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [occ, amp] : s.terms()) {
        const auto modes = occ.occupied_modes();
        const int k = modes[0];
        const int l = modes[1];
        const Complex coeff = (k == l) ? amp / sqrt2 : amp;
        pair_amps.noalias() += coeff * m.col(k) * m.col(l).transpose();
    }

    PhotonicState out(dim, 2);
    for (int i = 0; i < dim; ++i) {
        const Complex diag = pair_amps(i, i) * sqrt2;
        if (diag != Complex{}) out.add(FockOccupation::pair(dim, i, i), diag);
        for (int j = i + 1; j < dim; ++j) {
            const Complex off = pair_amps(i, j) + pair_amps(j, i);
            if (off != Complex{}) out.add(FockOccupation::pair(dim, i, j), off);
        }
    }
    return out;
}

PhotonicState apply(const ModeMatrix& m, const PhotonicState& s) {
    return s.photon_number() == 1 ? apply_single_photon(m, s) : apply_two_photon(m, s);
}

VacuumProjection vacuum_project(const PhotonicState& s, std::span<const int> error_modes) {
    check_indices(error_modes, s.modes(), "vacuum_project");
    PhotonicState kept(s.modes(), s.photon_number());
    double norm = 0.0;
    for (const auto& [occ, amp] : s.terms()) {
        const bool vacuum = std::all_of(error_modes.begin(), error_modes.end(),
                                        [&](int mode) { return occ[mode] == 0; });
        if (vacuum) {
            kept.add(occ, amp);
            norm += std::norm(amp);
        }
    }
    return {std::move(kept), norm};
}

PhotonicState restrict_modes(const PhotonicState& s, std::span<const int> keep) {
    check_indices(keep, s.modes(), "restrict_modes");
    PhotonicState out(static_cast<int>(keep.size()), s.photon_number());
    for (const auto& [occ, amp] : s.terms()) {
        std::vector<int> counts;
        counts.reserve(keep.size());
        for (int mode : keep) counts.push_back(occ[mode]);
        FockOccupation reduced(std::move(counts));
        if (reduced.total() != s.photon_number()) {
            if (amp == Complex{}) continue;
            throw std::invalid_argument("restrict_modes: dropped mode carries a photon");
        }
        out.add(reduced, amp);
    }
    return out;
}

PhotonicState embed_state(const PhotonicState& s, std::span<const int> target_modes, int total) {
    if (static_cast<int>(target_modes.size()) != s.modes()) {
        throw std::invalid_argument("embed_state: target mode count mismatch");
    }
    check_indices(target_modes, total, "embed_state");
    PhotonicState out(total, s.photon_number());
    for (const auto& [occ, amp] : s.terms()) {
        std::vector<int> counts(static_cast<std::size_t>(total), 0);
        for (int i = 0; i < s.modes(); ++i) counts[static_cast<std::size_t>(target_modes[i])] = occ[i];
        out.add(FockOccupation(std::move(counts)), amp);
    }
    return out;
}

ModeMatrix embed(const ModeMatrix& m, std::span<const int> target_modes, int total) {
    if (m.rows() != m.cols()) throw std::invalid_argument("embed: matrix not square");
    if (static_cast<int>(target_modes.size()) != m.rows() || m.rows() > total) {
        throw std::invalid_argument("embed: target mode count mismatch");
    }
    check_indices(target_modes, total, "embed");
    ModeMatrix out = ModeMatrix::Identity(total, total);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) out(target_modes[r], target_modes[c]) = m(r, c);
    }
    return out;
}

}  // namespace uavg
