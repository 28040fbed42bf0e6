#pragma once

// Fault-tolerant region in (error, loss) space after unitary averaging.
//
// A threshold curve lists boundary points (epsilon_i, gamma_i) with epsilon
// strictly increasing and gamma non-increasing; points on or below it are
// fault tolerant without averaging. Between points the boundary is linear in
// log-log coordinates. Above the largest epsilon nothing is fault tolerant;
// below the smallest epsilon the boundary is held at gamma_0, which is the
// most conservative value compatible with a non-increasing curve.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavg/analytic.hpp"
#include "uavg/table.hpp"

namespace uavg {

struct CurvePoint {
    double epsilon = 0.0;
    double gamma = 0.0;
};

class CurveFormatError : public std::runtime_error {
public:
    CurveFormatError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct ThresholdCurve {
    std::string code;
    std::vector<CurvePoint> points;

    /// Throws std::invalid_argument when the curve breaks an invariant.
    void validate() const;

    /// Boundary gamma at `epsilon`; nullopt above the curve's extent.
    std::optional<double> gamma_at(double epsilon) const;

    /// Raw membership of (epsilon, gamma), no averaging.
    bool contains(double epsilon, double gamma) const;

    /// Format: optional `# code: <name>` line, header `epsilon,gamma`, one
    /// point per row. Throws CurveFormatError with the offending line.
    static ThresholdCurve parse_csv(std::istream& in);
    /// Throws std::runtime_error when the file cannot be opened.
    static ThresholdCurve load(const std::string& path);
    std::string to_csv() const;
};

/// Inserts the log-log midpoint between every pair of neighbours.
ThresholdCurve densify(const ThresholdCurve& curve);

struct RegionQuery {
    double epsilon = 0.0;
    double gamma = 0.0;
    int copies = 1;
};

bool is_fault_tolerant(const RegionQuery& q, const ThresholdCurve& curve);

/// Columns epsilon, gamma, N, effective_error, effective_loss, fault_tolerant.
Table sweep_region(const std::vector<double>& epsilons, const std::vector<double>& gammas,
                   const std::vector<int>& copies, const ThresholdCurve& curve);

/// Smallest candidate N (taken in increasing order) that is fault tolerant.
std::optional<int> best_n(double epsilon, double gamma, std::vector<int> candidates, const ThresholdCurve& curve);

}  // namespace uavg
