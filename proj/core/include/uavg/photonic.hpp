#pragma once

// Few-photon linear-optical states and mode-matrix evolution.
//
// A mode matrix M describes a passive interferometer by its action on
// creation operators: a_k^dagger -> sum_i M(i, k) a_i^dagger. States are
// sparse maps from Fock occupations to amplitudes with a fixed total photon
// number of one or two.

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace uavg {

using Complex = std::complex<double>;
using ModeMatrix = Eigen::MatrixXcd;
using AmplitudeVector = Eigen::VectorXcd;

inline constexpr double kAlgebraicTol = 1e-10;
inline constexpr double kExactTol = 1e-12;

/// True when M^dagger M equals the identity entrywise within `tol`.
bool is_unitary(const ModeMatrix& m, double tol = kAlgebraicTol);

/// Largest entrywise modulus of `a - b`; dimensions must agree.
double max_abs_diff(const ModeMatrix& a, const ModeMatrix& b);

/// Photon counts per optical mode.
class FockOccupation {
public:
    FockOccupation() = default;
    explicit FockOccupation(std::vector<int> counts);

    /// One photon in `mode` out of `modes`.
    static FockOccupation single(int modes, int mode);
    /// Two photons in modes `a` and `b` (`a == b` gives a doubly occupied mode).
    static FockOccupation pair(int modes, int a, int b);

    int modes() const { return static_cast<int>(counts_.size()); }
    int total() const;
    int operator[](int mode) const { return counts_[static_cast<std::size_t>(mode)]; }
    const std::vector<int>& counts() const { return counts_; }

    /// Mode indices of the photons, with repetition, in ascending order.
    std::vector<int> occupied_modes() const;

    std::string to_string() const;

    auto operator<=>(const FockOccupation&) const = default;
    bool operator==(const FockOccupation&) const = default;

private:
    std::vector<int> counts_;
};

class PhotonicState {
public:
    using Terms = std::map<FockOccupation, Complex>;

    PhotonicState(int modes, int photon_number);

    /// Single-photon state with amplitude `amps[i]` on mode i.
    static PhotonicState from_amplitudes(std::span<const Complex> amps);
    static PhotonicState from_amplitudes(const AmplitudeVector& amps);
    static PhotonicState basis(const FockOccupation& occ);

    int modes() const { return modes_; }
    int photon_number() const { return photons_; }
    const Terms& terms() const { return terms_; }

    /// Adds `amp` to the amplitude of `occ`. Rejects occupations of the wrong
    /// shape or photon number and non-finite amplitudes.
    void add(const FockOccupation& occ, Complex amp);
    Complex amplitude(const FockOccupation& occ) const;

    double norm_sq() const;
    bool is_normalized(double tol = kAlgebraicTol) const;
    PhotonicState normalized() const;
    PhotonicState scaled(Complex factor) const;

    /// Dense amplitudes over modes; single-photon states only.
    AmplitudeVector single_photon_amplitudes() const;

    /// <this|other>.
    Complex inner(const PhotonicState& other) const;

    /// Largest amplitude difference over the union of supports.
    double distance(const PhotonicState& other) const;

private:
    int modes_;
    int photons_;
    Terms terms_;
};

PhotonicState apply_single_photon(const ModeMatrix& m, const PhotonicState& s);
PhotonicState apply_two_photon(const ModeMatrix& m, const PhotonicState& s);
/// Dispatches on the photon number of `s`.
PhotonicState apply(const ModeMatrix& m, const PhotonicState& s);

struct VacuumProjection {
    PhotonicState state;  // unnormalized
    double norm_sq = 0.0;
};

/// Keeps the terms with no photon in any of `error_modes`.
VacuumProjection vacuum_project(const PhotonicState& s, std::span<const int> error_modes);

/// Drops every mode not listed in `keep`, reindexing the survivors in the
/// given order. Dropped modes must be empty in every term.
PhotonicState restrict_modes(const PhotonicState& s, std::span<const int> keep);

/// Places `state` (on `target_modes.size()` modes) into a register of
/// `total` modes, mode i going to target_modes[i].
PhotonicState embed_state(const PhotonicState& s, std::span<const int> target_modes, int total);

/// Identity on untouched modes, `m` on `target_modes`.
ModeMatrix embed(const ModeMatrix& m, std::span<const int> target_modes, int total);

}  // namespace uavg
