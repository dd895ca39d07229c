#pragma once

#include <string>
#include <vector>

#include "wronbeta/beta_engine.hpp"
#include "wronbeta/series_core.hpp"

namespace wronbeta {

/// Validated invocation of one CLI command.
struct RunConfig {
    enum class Command { Decompose, Returns, Vol, Beta, Multibeta };
    enum class Mode { Value, Return, Volatility };

    Command command = Command::Beta;
    std::vector<std::string> inputs;  // target first, then factors
    std::string column = "close";
    std::vector<std::size_t> windows; // sample counts; exactly one except multibeta
    std::size_t vol_window = 0;       // 0: follow the estimation window
    ModelKind model = ModelKind::BetasOnly;
    Mode mode = Mode::Value;
    ReturnKind return_kind = ReturnKind::Simple;
    double epsilon = 1e-8;            // WRONBETA_EPSILON overrides the default
    std::string output;               // empty: stdout
    std::string plot_prefix;          // empty: no plot-data files
};

/// Parses command-line arguments (without the program name). Throws UsageError
/// listing every violated constraint; prints help and exits 0 on --help.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a command. Returns 0 on success, 1 on data errors (one-line
/// diagnostic on stderr).
int run(const RunConfig& config);

} // namespace wronbeta
