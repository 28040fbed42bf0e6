#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavg/table.hpp"

namespace uavg::cli {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kInternal = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a run depends on. Serialising it and running the result again
/// reproduces the output byte for byte.
struct RunConfig {
    std::string command;  // analytic | mc | encode-check | parity | ft-region

    std::vector<double> nu;
    std::vector<double> big_n;  // +inf allowed for analytic
    std::uint64_t samples = 100000;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out;
    std::string svg;
    unsigned threads = 0;

    // analytic
    std::string formula = "ps-single";
    std::string variant;  // empty: every variant of the formula

    // mc
    std::string family = "single";
    std::string gate = "I";
    std::string noise = "gaussian";
    double kurtosis = 1.0;  // four-moment law, m4 = kurtosis * nu^2
    std::string input;      // "H", "V", "D" or an occupation string like "1010"
    bool discriminate = false;

    // encode-check
    int levels = 1;
    std::vector<double> delta;
    bool correlated = true;

    // parity
    int n = 2;
    int q = 2;
    std::vector<double> p;

    // ft-region
    std::string curve;
    std::vector<double> epsilon;
    std::vector<double> gamma;
};

std::string to_json(const RunConfig& c);
/// Throws DataError on malformed JSON or unknown keys.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

Table cmd_analytic(const RunConfig& c);
Table cmd_mc(const RunConfig& c);
Table cmd_encode_check(const RunConfig& c);
Table cmd_parity(const RunConfig& c);
Table cmd_ft_region(const RunConfig& c);

/// Dispatches on c.command.
Table run(const RunConfig& c);
std::string render(const Table& t, const std::string& format);
ChartSpec default_chart(const RunConfig& c, const Table& t);

/// Full command line entry point; returns the process exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uavg::cli
