#include "uavg/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavg {

namespace {

void check_args(double nu, double n, const char* fn) {
    if (!(nu >= 0.0)) throw std::invalid_argument(std::string(fn) + ": variance must be >= 0");
    if (!(n >= 1.0)) throw std::invalid_argument(std::string(fn) + ": N must be >= 1");
}

double positive_or_throw(double denom, const char* fn) {
    if (!(denom > 0.0)) throw std::domain_error(std::string(fn) + ": outside the expansion's validity range");
    return denom;
}

// 1 - 3v + 3v/N + 4v^2 - 4v^2/N, the appendix denominator truncated at v^2.
double appendix_ps_truncated(double v, double inv) {
    return 1.0 - 3.0 * v + 3.0 * v * inv + 4.0 * v * v - 4.0 * v * v * inv;
}

}  // namespace

std::string_view to_string(FormulaVariant v) {
    switch (v) {
        case FormulaVariant::main_text: return "main-text";
        case FormulaVariant::main_text_consistent: return "main-text-consistent";
        case FormulaVariant::appendix_second_order: return "appendix-2nd-order";
        case FormulaVariant::appendix_fourth_order: return "appendix-4th-order";
    }
    return "?";
}

FormulaVariant parse_formula_variant(std::string_view name) {
    if (name == "main-text") return FormulaVariant::main_text;
    if (name == "main-text-consistent") return FormulaVariant::main_text_consistent;
    if (name == "appendix-2nd-order") return FormulaVariant::appendix_second_order;
    if (name == "appendix-4th-order") return FormulaVariant::appendix_fourth_order;
    throw std::invalid_argument("unknown formula variant '" + std::string(name) + "'");
}

double ps_single(double nu, double n, FormulaVariant variant) {
    check_args(nu, n, "ps_single");
    const double v = nu;
    const double inv = 1.0 / n;
    const double first = 1.0 - 3.0 * v + 3.0 * v * inv;
    switch (variant) {
        case FormulaVariant::main_text:
        case FormulaVariant::main_text_consistent:
            return first + 4.5 * v * v - 4.5 * v * v * inv;
        case FormulaVariant::appendix_second_order:
            return first + 2.25 * v * v + 3.0 * v * v * inv;
        case FormulaVariant::appendix_fourth_order: {
            const double v3 = v * v * v;
            const double v4 = v3 * v;
            return first + 4.0 * v * v - 4.0 * v * v * inv - 21.0 * v3 / 8.0 + v3 * inv / 12.0 +
                   49.0 * v4 / 64.0 + 13.0 * v4 * inv / 6.0;
        }
    }
    throw std::invalid_argument("ps_single: unknown variant");
}

double fidelity_single(double nu, double n, FormulaVariant variant) {
    check_args(nu, n, "fidelity_single");
    const double v = nu;
    const double inv = 1.0 / n;
    switch (variant) {
        case FormulaVariant::main_text: {
            // Printed denominator carries v/N where its own success
            // probability has 3v/N.
            const double denom = 1.0 - 3.0 * v + v * inv + 4.5 * v * v - 4.5 * v * v * inv;
            return (1.0 - 3.0 * v + 2.25 * v * v) / positive_or_throw(denom, "fidelity_single");
        }
        case FormulaVariant::main_text_consistent: {
            const double denom = ps_single(v, n, FormulaVariant::main_text);
            return (1.0 - 3.0 * v + 2.25 * v * v) / positive_or_throw(denom, "fidelity_single");
        }
        case FormulaVariant::appendix_second_order: {
            const double denom = appendix_ps_truncated(v, inv);
            return (1.0 - 3.0 * v + 4.0 * v * v) / positive_or_throw(denom, "fidelity_single");
        }
        case FormulaVariant::appendix_fourth_order: {
            const double amp = 1.0 - 1.5 * v + 0.875 * v * v;
            const double denom = appendix_ps_truncated(v, inv);
            return amp * amp / positive_or_throw(denom, "fidelity_single");
        }
    }
    throw std::invalid_argument("fidelity_single: unknown variant");
}

double ps_4mode(double nu, double n) {
    check_args(nu, n, "ps_4mode");
    const double inv = 1.0 / n;
    return 1.0 - 6.0 * nu + 6.0 * nu * inv + 18.0 * nu * nu - 18.0 * nu * nu * inv * inv;
}

double ps_4mode_linear_n(double nu, double n) {
    check_args(nu, n, "ps_4mode_linear_n");
    const double inv = 1.0 / n;
    return 1.0 - 6.0 * nu + 6.0 * nu * inv + 18.0 * nu * nu - 18.0 * nu * nu * inv;
}

double fidelity_4mode(double nu, double n) {
    const double p = ps_4mode(nu, n);
    return (1.0 - 6.0 * nu) / positive_or_throw(p, "fidelity_4mode");
}

double ps_type2(double nu, double n, FormulaVariant variant) {
    check_args(nu, n, "ps_type2");
    const double inv = 1.0 / n;
    const double c2 = variant == FormulaVariant::main_text || variant == FormulaVariant::main_text_consistent
                          ? 2.0
                          : 5.0 / 3.0;
    return 1.0 - 2.0 * nu + 2.0 * nu * inv + c2 * nu * nu - c2 * nu * nu * inv;
}

double fidelity_type2(double nu, double n, FormulaVariant variant) {
    const double p = ps_type2(nu, n, variant);
    const double c2 = variant == FormulaVariant::main_text || variant == FormulaVariant::main_text_consistent
                          ? 2.0
                          : 5.0 / 3.0;
    return (1.0 - 2.0 * nu + c2 * nu * nu) / positive_or_throw(p, "fidelity_type2");
}

double ps_first_order(double v, double n) {
    check_args(v, n, "ps_first_order");
    if (!(v < 1.0)) throw std::invalid_argument("ps_first_order: V must be < 1");
    return 1.0 - v + v / n;
}

double fidelity_first_order(double v, double n) {
    check_args(v, n, "fidelity_first_order");
    if (!(v < 1.0)) throw std::invalid_argument("fidelity_first_order: V must be < 1");
    // V / (N + V - N V) written with 1/N so that N = inf gives exactly 1.
    const double inv = 1.0 / n;
    return 1.0 - v * inv / (1.0 - v + v * inv);
}

FtPoint effective_rates(double epsilon, double gamma, double n) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("effective_rates: epsilon must be in [0, 1)");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("effective_rates: gamma must be in [0, 1)");
    if (!(n >= 1.0)) throw std::invalid_argument("effective_rates: N must be >= 1");
    const double inv = 1.0 / n;
    FtPoint p;
    p.epsilon = epsilon;
    p.gamma = gamma;
    p.copies = n;
    p.effective_loss = gamma / 3.0 * (3.0 + 2.0 * std::log2(n)) + epsilon * (1.0 - inv);
    p.effective_error = epsilon * inv / (1.0 - epsilon + epsilon * inv);
    return p;
}

}  // namespace uavg
