#include "uavg/ft_region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uavg {

namespace {

void check_power_of_two(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw std::invalid_argument("N must be a power of two, got " + std::to_string(n));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, int line, const char* what) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw CurveFormatError(line, std::string("bad ") + what + " value '" + t + "'");
    return v;
}

}  // namespace

void ThresholdCurve::validate() const {
    if (points.size() < 2) throw std::invalid_argument("threshold curve needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.epsilon > 0.0 && p.epsilon < 1.0 && p.gamma > 0.0 && p.gamma < 1.0)) {
            throw std::invalid_argument("threshold curve point " + std::to_string(i) + " lies outside (0, 1)");
        }
        if (i > 0 && !(p.epsilon > points[i - 1].epsilon)) {
            throw std::invalid_argument("threshold curve epsilon must increase strictly (point " + std::to_string(i) + ")");
        }
        if (i > 0 && p.gamma > points[i - 1].gamma) {
            throw std::invalid_argument("threshold curve gamma must not increase (point " + std::to_string(i) + ")");
        }
    }
}

std::optional<double> ThresholdCurve::gamma_at(double epsilon) const {
    if (epsilon <= points.front().epsilon) return points.front().gamma;
    if (epsilon > points.back().epsilon) return std::nullopt;
    const auto hi = std::lower_bound(points.begin(), points.end(), epsilon,
                                     [](const CurvePoint& p, double e) { return p.epsilon < e; });
    if (hi->epsilon == epsilon) return hi->gamma;
    const auto lo = hi - 1;
    const double t = (std::log(epsilon) - std::log(lo->epsilon)) / (std::log(hi->epsilon) - std::log(lo->epsilon));
    return std::exp((1.0 - t) * std::log(lo->gamma) + t * std::log(hi->gamma));
}

bool ThresholdCurve::contains(double epsilon, double gamma) const {
    const auto g = gamma_at(epsilon);
    return g && gamma <= *g;
}

ThresholdCurve ThresholdCurve::parse_csv(std::istream& in) {
    ThresholdCurve curve;
    std::string raw;
    int line = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s[0] == '#') {
            const std::string body = trim(s.substr(1));
            if (body.rfind("code:", 0) == 0) curve.code = trim(body.substr(5));
            continue;
        }
        if (!header) {
            std::string h = s;
            h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
            if (h != "epsilon,gamma") throw CurveFormatError(line, "expected header 'epsilon,gamma'");
            header = true;
            continue;
        }
        const auto comma = s.find(',');
        if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos) {
            throw CurveFormatError(line, "expected two comma-separated values");
        }
        const double e = parse_number(s.substr(0, comma), line, "epsilon");
        const double g = parse_number(s.substr(comma + 1), line, "gamma");
        if (!(e > 0.0 && e < 1.0 && g > 0.0 && g < 1.0)) throw CurveFormatError(line, "coordinates must lie in (0, 1)");
        if (!curve.points.empty()) {
            if (!(e > curve.points.back().epsilon)) throw CurveFormatError(line, "epsilon must increase strictly");
            if (g > curve.points.back().gamma) throw CurveFormatError(line, "gamma must not increase");
        }
        curve.points.push_back({e, g});
    }
    if (!header) throw CurveFormatError(line, "missing header 'epsilon,gamma'");
    if (curve.points.size() < 2) throw CurveFormatError(line, "curve needs at least two points");
    return curve;
}

ThresholdCurve ThresholdCurve::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve file '" + path + "'");
    return parse_csv(in);
}

std::string ThresholdCurve::to_csv() const {
    std::ostringstream os;
    if (!code.empty()) os << "# code: " << code << '\n';
    os << "epsilon,gamma\n";
    for (const auto& p : points) os << format_double(p.epsilon) << ',' << format_double(p.gamma) << '\n';
    return os.str();
}

ThresholdCurve densify(const ThresholdCurve& curve) {
    curve.validate();
    ThresholdCurve out{curve.code, {}};
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (i > 0) {
            const auto& a = curve.points[i - 1];
            const auto& b = curve.points[i];
            out.points.push_back({std::sqrt(a.epsilon * b.epsilon), std::sqrt(a.gamma * b.gamma)});
        }
        out.points.push_back(curve.points[i]);
    }
    return out;
}

bool is_fault_tolerant(const RegionQuery& q, const ThresholdCurve& curve) {
    curve.validate();
    check_power_of_two(q.copies);
    const FtPoint p = effective_rates(q.epsilon, q.gamma, q.copies);
    return curve.contains(p.effective_error, p.effective_loss);
}

Table sweep_region(const std::vector<double>& epsilons, const std::vector<double>& gammas,
                   const std::vector<int>& copies, const ThresholdCurve& curve) {
    curve.validate();
    for (int n : copies) check_power_of_two(n);
    Table t({"epsilon", "gamma", "N", "effective_error", "effective_loss", "fault_tolerant"});
    for (double e : epsilons) {
        for (double g : gammas) {
            for (int n : copies) {
                const FtPoint p = effective_rates(e, g, n);
                t.add_row({e, g, std::int64_t{n}, p.effective_error, p.effective_loss,
                           curve.contains(p.effective_error, p.effective_loss)});
            }
        }
    }
    return t;
}

std::optional<int> best_n(double epsilon, double gamma, std::vector<int> candidates, const ThresholdCurve& curve) {
    std::sort(candidates.begin(), candidates.end());
    for (int n : candidates) {
        if (is_fault_tolerant({epsilon, gamma, n}, curve)) return n;
    }
    return std::nullopt;
}

}  // namespace uavg
