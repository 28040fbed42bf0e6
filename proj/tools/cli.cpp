#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "uavg/analytic.hpp"
#include "uavg/averaging.hpp"
#include "uavg/ft_region.hpp"
#include "uavg/monte_carlo.hpp"
#include "uavg/parity.hpp"

namespace uavg::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json n_list_to_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) {
        if (std::isinf(x)) out.push_back("inf");
        else out.push_back(x);
    }
    return out;
}

double parse_n(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("bad N value '" + s + "'");
    return v;
}

std::vector<int> powers_of_two(const std::vector<double>& values) {
    std::vector<int> out;
    for (double v : values) {
        if (!(v >= 1.0 && v <= 1 << 20) || v != std::floor(v) || (static_cast<int>(v) & (static_cast<int>(v) - 1))) {
            throw UsageError("N must be a power of two, got " + format_double(v));
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// Converts library argument errors into usage errors.
template <class Fn>
auto guarded(Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

double or_nan(const std::function<double()>& f) {
    try {
        return f();
    } catch (const std::domain_error&) {
        return kNaN;
    }
}

PhotonicState parse_input(const std::string& text, const GateSpec& spec) {
    if (text.empty()) return default_input(spec);
    const int modes = mode_count(spec);
    if (text == "H" || text == "V" || text == "D") {
        if (modes != 2) throw UsageError("input '" + text + "' needs the single-qubit family");
        if (text == "H") return PhotonicState::basis(FockOccupation::single(2, 0));
        if (text == "V") return PhotonicState::basis(FockOccupation::single(2, 1));
        const Complex h(std::sqrt(0.5), 0.0);
        const Complex amps[2] = {h, h};
        return PhotonicState::from_amplitudes(std::span<const Complex>(amps, 2));
    }
    if (static_cast<int>(text.size()) != modes || text.find_first_not_of("012") != std::string::npos) {
        throw UsageError("input must be H, V, D or an occupation string of " + std::to_string(modes) + " digits");
    }
    std::vector<int> counts;
    for (char ch : text) counts.push_back(ch - '0');
    const FockOccupation occ(counts);
    if (occ.total() < 1 || occ.total() > 2) throw UsageError("input must carry one or two photons");
    return PhotonicState::basis(occ);
}

GateSpec gate_for(const RunConfig& c) {
    const GateFamily family = guarded([&] { return parse_gate_family(c.family); });
    switch (family) {
        case GateFamily::single_qubit: return guarded([&] { return named_gate(std::string_view(c.gate)); });
        case GateFamily::four_mode: return FourModeParams::type2_compatible();
        case GateFamily::type2: return FusionParams{};
    }
    return GateParams{};
}

NoiseSpec noise_for(const RunConfig& c, double nu) {
    const NoiseKind kind = guarded([&] { return parse_noise_kind(c.noise); });
    NoiseSpec spec;
    switch (kind) {
        case NoiseKind::gaussian: spec = NoiseSpec::gaussian(nu); break;
        case NoiseKind::uniform: spec = NoiseSpec::uniform(nu); break;
        case NoiseKind::four_moment: spec = NoiseSpec::four_moment(nu, c.kurtosis * nu * nu); break;
    }
    guarded([&] {
        spec.validate();
        return 0;
    });
    return spec;
}

struct NamedCurve {
    std::string name;
    std::function<double(double, double)> f;
};

std::vector<NamedCurve> formula_variants(const std::string& formula) {
    using V = FormulaVariant;
    auto single = [](auto fn, std::vector<V> vs) {
        std::vector<NamedCurve> out;
        for (V v : vs) out.push_back({std::string(to_string(v)), [fn, v](double nu, double n) { return fn(nu, n, v); }});
        return out;
    };
    const std::vector<V> ps_variants = {V::main_text, V::appendix_second_order, V::appendix_fourth_order};
    const std::vector<V> all = {V::main_text, V::main_text_consistent, V::appendix_second_order, V::appendix_fourth_order};
    if (formula == "ps-single") return single(ps_single, ps_variants);
    if (formula == "fidelity-single") return single(fidelity_single, all);
    if (formula == "ps-type2" || formula == "fidelity-type2") {
        const auto fn = formula == "ps-type2" ? ps_type2 : fidelity_type2;
        return {{"main-text", [fn](double nu, double n) { return fn(nu, n, V::main_text); }},
                {"appendix", [fn](double nu, double n) { return fn(nu, n, V::appendix_second_order); }}};
    }
    if (formula == "ps-4mode") return {{"printed", ps_4mode}};
    if (formula == "ps-4mode-linear") return {{"inverse-linear", ps_4mode_linear_n}};
    if (formula == "fidelity-4mode") return {{"printed", fidelity_4mode}};
    if (formula == "ps-first-order") return {{"first-order", ps_first_order}};
    if (formula == "fidelity-first-order") return {{"first-order", fidelity_first_order}};
    throw UsageError("unknown formula '" + formula + "'");
}

void require_seed(const RunConfig& c) {
    if (!c.seed) throw UsageError("--seed is required for " + c.command);
}

}  // namespace

// ---------------------------------------------------------------------------
// Serialisation

std::string to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["nu"] = c.nu;
    j["big_n"] = n_list_to_json(c.big_n);
    j["samples"] = c.samples;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    j["format"] = c.format;
    j["out"] = c.out;
    j["svg"] = c.svg;
    j["threads"] = c.threads;
    j["formula"] = c.formula;
    j["variant"] = c.variant;
    j["family"] = c.family;
    j["gate"] = c.gate;
    j["noise"] = c.noise;
    j["kurtosis"] = c.kurtosis;
    j["input"] = c.input;
    j["discriminate"] = c.discriminate;
    j["levels"] = c.levels;
    j["delta"] = c.delta;
    j["correlated"] = c.correlated;
    j["n"] = c.n;
    j["q"] = c.q;
    j["p"] = c.p;
    j["curve"] = c.curve;
    j["epsilon"] = c.epsilon;
    j["gamma"] = c.gamma;
    return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
    RunConfig c;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw DataError("config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            if (key == "command") c.command = value.get<std::string>();
            else if (key == "nu") c.nu = value.get<std::vector<double>>();
            else if (key == "big_n") {
                c.big_n.clear();
                for (const auto& v : value) c.big_n.push_back(v.is_string() ? parse_n(v.get<std::string>()) : v.get<double>());
            } else if (key == "samples") c.samples = value.get<std::uint64_t>();
            else if (key == "seed") c.seed = value.is_null() ? std::nullopt : std::optional(value.get<std::uint64_t>());
            else if (key == "format") c.format = value.get<std::string>();
            else if (key == "out") c.out = value.get<std::string>();
            else if (key == "svg") c.svg = value.get<std::string>();
            else if (key == "threads") c.threads = value.get<unsigned>();
            else if (key == "formula") c.formula = value.get<std::string>();
            else if (key == "variant") c.variant = value.get<std::string>();
            else if (key == "family") c.family = value.get<std::string>();
            else if (key == "gate") c.gate = value.get<std::string>();
            else if (key == "noise") c.noise = value.get<std::string>();
            else if (key == "kurtosis") c.kurtosis = value.get<double>();
            else if (key == "input") c.input = value.get<std::string>();
            else if (key == "discriminate") c.discriminate = value.get<bool>();
            else if (key == "levels") c.levels = value.get<int>();
            else if (key == "delta") c.delta = value.get<std::vector<double>>();
            else if (key == "correlated") c.correlated = value.get<bool>();
            else if (key == "n") c.n = value.get<int>();
            else if (key == "q") c.q = value.get<int>();
            else if (key == "p") c.p = value.get<std::vector<double>>();
            else if (key == "curve") c.curve = value.get<std::string>();
            else if (key == "epsilon") c.epsilon = value.get<std::vector<double>>();
            else if (key == "gamma") c.gamma = value.get<std::vector<double>>();
            else throw DataError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Commands

Table cmd_analytic(const RunConfig& c) {
    auto variants = formula_variants(c.formula);
    if (!c.variant.empty()) {
        std::erase_if(variants, [&](const NamedCurve& v) { return v.name != c.variant; });
        if (variants.empty()) throw UsageError("formula '" + c.formula + "' has no variant '" + c.variant + "'");
    }
    Table t({"nu", "N", "value", "variant"});
    for (double nu : c.nu) {
        for (double n : c.big_n) {
            for (const auto& v : variants) {
                const double value = guarded([&] { return or_nan([&] { return v.f(nu, n); }); });
                t.add_row({nu, n, value, v.name});
            }
        }
    }
    t.add_note("formula", c.formula);
    return t;
}

Table cmd_mc(const RunConfig& c) {
    require_seed(c);
    if (c.samples == 0) throw UsageError("--samples must be >= 1");
    const GateSpec spec = gate_for(c);
    const GateFamily family = family_of(spec);
    const std::vector<int> copies = powers_of_two(c.big_n);
    const int depth = path_depth(spec);

    McConfig mc;
    mc.samples = c.samples;
    mc.threads = c.threads;
    mc.input_state = parse_input(c.input, spec);

    std::vector<std::string> columns = {"nu",
                                        "N",
                                        "samples",
                                        "ps_mc",
                                        "ps_stderr",
                                        "fidelity_ratio_of_means",
                                        "fidelity_ratio_of_means_stderr",
                                        "fidelity_mean_of_ratios",
                                        "fidelity_mean_of_ratios_stderr",
                                        "excluded",
                                        "fidelity_coherent",
                                        "fidelity_coherent_stderr",
                                        "ps_first_order",
                                        "fidelity_first_order"};
    std::vector<NamedCurve> analytic;
    auto add_formula = [&](const std::string& prefix, const std::string& formula) {
        for (auto& v : formula_variants(formula)) {
            columns.push_back(prefix + "_" + v.name);
            analytic.push_back(v);
        }
    };
    switch (family) {
        case GateFamily::single_qubit:
            add_formula("ps", "ps-single");
            add_formula("fidelity", "fidelity-single");
            break;
        case GateFamily::type2:
            add_formula("ps", "ps-type2");
            add_formula("fidelity", "fidelity-type2");
            break;
        case GateFamily::four_mode:
            add_formula("ps", "ps-4mode");
            add_formula("ps", "ps-4mode-linear");
            add_formula("fidelity", "fidelity-4mode");
            break;
    }

    Table t(columns);
    std::vector<DiscriminationPoint> points;
    std::uint64_t cell = 0;
    for (double nu : c.nu) {
        const NoiseSpec noise = noise_for(c, nu);
        for (int n : copies) {
            mc.master_seed = cell_seed(*c.seed, cell++);
            const McResult r = guarded([&] { return run_ensemble(spec, noise, n, mc); });
            points.push_back({nu, n, r.ps.mean, r.ps.std_error});
            const double v = depth * nu;
            std::vector<Cell> row = {nu,
                                     std::int64_t{n},
                                     static_cast<std::int64_t>(c.samples),
                                     r.ps.mean,
                                     r.ps.std_error,
                                     r.ratio_of_means.mean,
                                     r.ratio_of_means.std_error,
                                     r.mean_of_ratios.mean,
                                     r.mean_of_ratios.std_error,
                                     static_cast<std::int64_t>(r.mean_of_ratios.excluded),
                                     r.coherent.mean,
                                     r.coherent.std_error,
                                     v < 1.0 ? ps_first_order(v, n) : kNaN,
                                     v < 1.0 ? fidelity_first_order(v, n) : kNaN};
            for (const auto& a : analytic) row.push_back(or_nan([&] { return a.f(nu, n); }));
            t.add_row(std::move(row));
        }
    }
    t.add_note("family", std::string(to_string(family)));
    t.add_note("noise", c.noise);
    t.add_note("seed", std::to_string(*c.seed));
    if (c.discriminate) {
        const auto report = guarded([&] { return discriminate(family, points); });
        t.add_note("discrimination_fit_c0", format_double(report.fit.c0));
        t.add_note("discrimination_fit_c1", format_double(report.fit.c1));
        t.add_note("discrimination_fit_c2", format_double(report.fit.c2));
        for (const auto& s : report.scores) t.add_note("discrimination_distance_sq:" + s.name, format_double(s.distance_sq));
        t.add_note("discrimination_selected", report.selected);
        t.add_note("discrimination_margin", format_double(report.margin));
    }
    return t;
}

Table cmd_encode_check(const RunConfig& c) {
    EncoderProbe probe;
    probe.levels = c.levels;
    probe.correlated = c.correlated;
    if (c.seed) probe.pattern_seed = *c.seed;
    const auto scaling = guarded([&] { return encoder_error_scaling(probe, c.delta); });
    Table t({"delta", "deviation"});
    for (const auto& p : scaling.points) t.add_row({p.delta, p.deviation});
    t.add_note("levels", std::to_string(c.levels));
    t.add_note("slope", format_double(scaling.slope));
    const auto derivs = guarded([&] { return encoder_first_derivative_norms(probe); });
    double worst = 0.0;
    for (double d : derivs) worst = std::max(worst, d);
    t.add_note("max_first_derivative", format_double(worst));
    return t;
}

Table cmd_parity(const RunConfig& c) {
    const ParityCode code{c.n, c.q};
    guarded([&] {
        code.validate();
        return 0;
    });
    Table t({"p", "n", "q", "success_closed", "success_enumerated"});
    for (double p : c.p) {
        const double closed = guarded([&] { return logical_success_prob(code, {p}); });
        const double enumerated = code.physical() <= 16 ? logical_success_enumerated<double>(code, p) : kNaN;
        t.add_row({p, std::int64_t{c.n}, std::int64_t{c.q}, closed, enumerated});
    }
    return t;
}

Table cmd_ft_region(const RunConfig& c) {
    if (c.curve.empty()) throw UsageError("--curve is required for ft-region");
    ThresholdCurve curve;
    try {
        curve = ThresholdCurve::load(c.curve);
    } catch (const CurveFormatError& e) {
        throw DataError(c.curve + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw DataError(e.what());
    }
    const std::vector<int> copies = powers_of_two(c.big_n);
    Table t = guarded([&] { return sweep_region(c.epsilon, c.gamma, copies, curve); });
    if (!curve.code.empty()) t.add_note("code", curve.code);
    return t;
}

Table run(const RunConfig& c) {
    if (c.command == "analytic") return cmd_analytic(c);
    if (c.command == "mc") return cmd_mc(c);
    if (c.command == "encode-check") return cmd_encode_check(c);
    if (c.command == "parity") return cmd_parity(c);
    if (c.command == "ft-region") return cmd_ft_region(c);
    if (c.command.empty()) throw UsageError("no subcommand given");
    throw UsageError("unknown subcommand '" + c.command + "'");
}

std::string render(const Table& t, const std::string& format) {
    if (format == "csv") return t.to_csv();
    if (format == "json") return t.to_json();
    throw UsageError("unknown format '" + format + "'");
}

ChartSpec default_chart(const RunConfig& c, const Table& t) {
    if (c.command == "analytic") {
        std::set<std::string> variants;
        for (const auto& row : t.rows()) variants.insert(std::get<std::string>(row[3]));
        return {"nu", "value", variants.size() > 1 ? "variant" : "N", c.formula, false, false};
    }
    if (c.command == "mc") return {"nu", "ps_mc", "N", "Monte Carlo success probability", false, false};
    if (c.command == "encode-check") return {"delta", "deviation", "", "Encoder deviation", true, true};
    if (c.command == "parity") return {"p", "success_closed", "", "Logical success probability", false, false};
    return {"epsilon", "effective_error", "N", "Effective error", true, true};
}

// ---------------------------------------------------------------------------
// Command line

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw DataError("cannot write '" + path + "'");
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unitary averaging simulator and calculator", "uavg"};
    app.set_version_flag("--version", "uavg 0.1.0");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::string save_config;
    app.add_option("--config", config_path, "Read the run configuration from a JSON file");
    app.add_option("--save-config", save_config, "Write the effective run configuration as JSON");

    RunConfig f;
    std::vector<std::string> big_n;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;
    auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> copy) {
        bound.emplace_back(opt, std::move(copy));
        return opt;
    };

    bind(app.add_option("--out", f.out, "Output file (default stdout)"), [&](RunConfig& c) { c.out = f.out; });

    auto output_opts = [&](CLI::App* s) {
        bind(s->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"})),
             [&](RunConfig& c) { c.format = f.format; });
        bind(s->add_option("--out", f.out, "Output file (default stdout)"), [&](RunConfig& c) { c.out = f.out; });
        bind(s->add_option("--svg", f.svg, "Also write an SVG line chart"), [&](RunConfig& c) { c.svg = f.svg; });
    };
    auto nu_opt = [&](CLI::App* s) {
        bind(s->add_option("--nu", f.nu, "Noise variance grid")->delimiter(','), [&](RunConfig& c) { c.nu = f.nu; });
    };
    auto n_opt = [&](CLI::App* s) {
        bind(s->add_option("--big-n", big_n, "Copy counts N (inf allowed where meaningful)")->delimiter(','),
             [&](RunConfig& c) {
                 c.big_n.clear();
                 for (const auto& s : big_n) c.big_n.push_back(parse_n(s));
             });
    };
    auto seed_opt = [&](CLI::App* s) {
        bind(s->add_option("--seed", f.seed, "Master seed"), [&](RunConfig& c) { c.seed = f.seed; });
    };

    auto* analytic = app.add_subcommand("analytic", "Evaluate closed-form expressions");
    bind(analytic->add_option("--formula", f.formula, "Formula id"), [&](RunConfig& c) { c.formula = f.formula; });
    bind(analytic->add_option("--variant", f.variant, "Restrict to one variant"), [&](RunConfig& c) { c.variant = f.variant; });
    nu_opt(analytic);
    n_opt(analytic);
    output_opts(analytic);

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates beside the closed forms");
    bind(mc->add_option("--family", f.family, "single, four-mode or type2"), [&](RunConfig& c) { c.family = f.family; });
    bind(mc->add_option("--gate", f.gate, "I, X, Y, H or Z:<alpha> (single family)"), [&](RunConfig& c) { c.gate = f.gate; });
    bind(mc->add_option("--noise", f.noise, "gaussian, uniform or four-moment"), [&](RunConfig& c) { c.noise = f.noise; });
    bind(mc->add_option("--kurtosis", f.kurtosis, "m4 / nu^2 for the four-moment law"),
         [&](RunConfig& c) { c.kurtosis = f.kurtosis; });
    bind(mc->add_option("--input", f.input, "H, V, D or an occupation string"), [&](RunConfig& c) { c.input = f.input; });
    bind(mc->add_option("--samples", f.samples, "Samples per grid cell"), [&](RunConfig& c) { c.samples = f.samples; });
    bind(mc->add_option("--threads", f.threads, "Worker threads (0: all cores)"), [&](RunConfig& c) { c.threads = f.threads; });
    bind(mc->add_flag("--discriminate", f.discriminate, "Fit the second-order coefficients"),
         [&](RunConfig& c) { c.discriminate = f.discriminate; });
    nu_opt(mc);
    n_opt(mc);
    seed_opt(mc);
    output_opts(mc);

    auto* encode = app.add_subcommand("encode-check", "Encoder-noise scaling of the averaged output");
    bind(encode->add_option("--levels", f.levels, "Tree levels n (N = 2^n)"), [&](RunConfig& c) { c.levels = f.levels; });
    bind(encode->add_option("--delta", f.delta, "Splitter angle errors")->delimiter(','), [&](RunConfig& c) { c.delta = f.delta; });
    bind(encode->add_option("--correlated", f.correlated, "Both rails share one splitter angle"),
         [&](RunConfig& c) { c.correlated = f.correlated; });
    seed_opt(encode);
    output_opts(encode);

    auto* parity = app.add_subcommand("parity", "Logical success of the parity code");
    bind(parity->add_option("--n", f.n, "Qubits per parity block"), [&](RunConfig& c) { c.n = f.n; });
    bind(parity->add_option("--q", f.q, "Redundant copies"), [&](RunConfig& c) { c.q = f.q; });
    bind(parity->add_option("--p", f.p, "Herald probability grid")->delimiter(','), [&](RunConfig& c) { c.p = f.p; });
    output_opts(parity);

    auto* ft = app.add_subcommand("ft-region", "Fault-tolerant region sweep");
    bind(ft->add_option("--curve", f.curve, "Threshold curve CSV"), [&](RunConfig& c) { c.curve = f.curve; });
    bind(ft->add_option("--epsilon", f.epsilon, "Error grid")->delimiter(','), [&](RunConfig& c) { c.epsilon = f.epsilon; });
    bind(ft->add_option("--gamma", f.gamma, "Loss grid")->delimiter(','), [&](RunConfig& c) { c.gamma = f.gamma; });
    n_opt(ft);
    output_opts(ft);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
        for (auto& [opt, copy] : bound)
            if (opt->count() > 0) copy(c);

        if (!save_config.empty()) write_file(save_config, to_json(c));
        const Table table = run(c);
        const std::string text = render(table, c.format);
        if (c.out.empty()) out << text;
        else write_file(c.out, text);
        if (!c.svg.empty()) write_file(c.svg, svg_line_chart(table, default_chart(c, table)));
        return kOk;
    } catch (const UsageError& e) {
        err << "uavg: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "uavg: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "uavg: internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace uavg::cli
