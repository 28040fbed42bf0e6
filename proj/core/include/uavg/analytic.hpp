#pragma once

// Closed-form success probabilities, fidelities and effective fault-tolerance
// rates. Where the literature prints several mutually inconsistent series for
// the same quantity, every printed form is kept under its own FormulaVariant so
// Monte Carlo can tell them apart.
//
// All functions take the per-parameter variance nu >= 0 (or the characteristic
// noise V) and the number of averaged copies N >= 1. N may be +infinity.

#include <string_view>
#include <vector>

namespace uavg {

enum class FormulaVariant {
    /// Series quoted alongside the figures (Gaussian moments).
    main_text,
    /// Main-text fidelity with the success probability of the same family as
    /// its denominator (3 nu / N rather than the printed nu / N).
    main_text_consistent,
    /// Second-order appendix expansion.
    appendix_second_order,
    /// Appendix expansion carried to fourth order in the noise terms.
    appendix_fourth_order,
};

std::string_view to_string(FormulaVariant v);
FormulaVariant parse_formula_variant(std::string_view name);

/// Single-qubit success probability.
///   main_text / main_text_consistent: 1 - 3v + 3v/N + 9v^2/2 - 9v^2/(2N)
///   appendix_second_order:            1 - 3v + 3v/N + 9v^2/4 + 3v^2/N
///   appendix_fourth_order:            1 - 3v + 3v/N + 4v^2 - 4v^2/N
///                                     - 21v^3/8 + v^3/(12N) + 49v^4/64 + 13v^4/(6N)
double ps_single(double nu, double n, FormulaVariant variant = FormulaVariant::main_text);

/// Single-qubit post-selected fidelity.
///   main_text:             (1 - 3v + 9v^2/4) / (1 - 3v + v/N + 9v^2/2 - 9v^2/(2N))
///   main_text_consistent:  (1 - 3v + 9v^2/4) / ps_single(main_text)
///   appendix_second_order: (1 - 3v + 4v^2) / (1 - 3v + 3v/N + 4v^2 - 4v^2/N)
///   appendix_fourth_order: (1 - 3v/2 + 7v^2/8)^2 / (1 - 3v + 3v/N + 4v^2 - 4v^2/N)
/// Throws std::domain_error when the denominator is not positive.
double fidelity_single(double nu, double n, FormulaVariant variant = FormulaVariant::appendix_fourth_order);

/// 1 - 6v + 6v/N + 18v^2 - 18v^2/N^2 (the N^2 is as printed).
double ps_4mode(double nu, double n);
/// (1 - 6v) / ps_4mode.
double fidelity_4mode(double nu, double n);
/// Sibling form of ps_4mode with 1/N on the last term; a discrimination
/// hypothesis only.
double ps_4mode_linear_n(double nu, double n);

/// Type-II fusion.
///   main_text:   P = 1 - 2v + 2v/N + 2v^2 - 2v^2/N,      F = (1 - 2v + 2v^2) / P
///   appendix_*:  P = 1 - 2v + 2v/N + 5v^2/3 - 5v^2/(3N), F = (1 - 2v + 5v^2/3) / P
double ps_type2(double nu, double n, FormulaVariant variant = FormulaVariant::main_text);
double fidelity_type2(double nu, double n, FormulaVariant variant = FormulaVariant::main_text);

/// First order in the characteristic noise V = d * nu, 0 <= V < 1.
double ps_first_order(double v, double n);
double fidelity_first_order(double v, double n);

struct FtPoint {
    double epsilon = 0.0;  // per-gate depolarisation probability
    double gamma = 0.0;    // per-qubit per-gate loss
    double copies = 1.0;   // N
    double effective_error = 0.0;
    double effective_loss = 0.0;
};

/// Gamma_eff = (gamma/3)(3 + 2 log2 N) + eps (1 - 1/N),  E = eps / (N + eps - N eps).
FtPoint effective_rates(double epsilon, double gamma, double n);

}  // namespace uavg
