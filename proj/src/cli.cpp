#include "wronbeta/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "wronbeta/ingest.hpp"
#include "wronbeta/moments.hpp"

namespace wronbeta {

namespace {

using Command = RunConfig::Command;
using Mode = RunConfig::Mode;

const std::map<std::string, ModelKind> kModelNames{{"with_alpha", ModelKind::WithAlpha},
                                                   {"betas_only", ModelKind::BetasOnly}};
const std::map<std::string, Mode> kModeNames{{"value", Mode::Value},
                                             {"return", Mode::Return},
                                             {"volatility", Mode::Volatility}};
const std::map<std::string, ReturnKind> kReturnKinds{{"simple", ReturnKind::Simple},
                                                     {"log", ReturnKind::Log}};

} // namespace

RunConfig parse_args(const std::vector<std::string>& args)
{
    RunConfig cfg;
    std::string input;
    std::string target;
    std::vector<std::string> factor_files;

    CLI::App app{"Time-varying alpha/beta estimation from sliding-window iterated averages"};
    app.name("wronbeta");
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--column", cfg.column, "value column name")->capture_default_str();
        cmd->add_option("--output,-o", cfg.output, "output CSV path (default: stdout)");
        cmd->add_option("--plot-data", cfg.plot_prefix, "prefix for two-column plot files");
    };
    auto add_estimation = [&](CLI::App* cmd) {
        cmd->add_option("--target", target, "target price CSV");
        cmd->add_option("--factor", factor_files, "factor price CSV (repeatable)");
        cmd->add_option("--model", cfg.model, "with_alpha | betas_only")
            ->transform(CLI::CheckedTransformer(kModelNames));
        cmd->add_option("--mode", cfg.mode, "value | return | volatility")
            ->transform(CLI::CheckedTransformer(kModeNames));
        cmd->add_option("--return-kind", cfg.return_kind, "simple | log")
            ->transform(CLI::CheckedTransformer(kReturnKinds));
        cmd->add_option("--vol-window", cfg.vol_window,
                        "volatility window in samples (default: the estimation window)");
        cmd->add_option("--epsilon", cfg.epsilon, "independence threshold")
            ->envname("WRONBETA_EPSILON");
    };

    CLI::App* decompose = app.add_subcommand("decompose", "trend / fluctuation split");
    decompose->add_option("--input", input, "price CSV");
    decompose->add_option("--window,-w", cfg.windows, "window in samples")->expected(1);
    add_common(decompose);

    CLI::App* rets = app.add_subcommand("returns", "per-step returns");
    rets->add_option("--input", input, "price CSV");
    rets->add_option("--return-kind", cfg.return_kind, "simple | log")
        ->transform(CLI::CheckedTransformer(kReturnKinds));
    add_common(rets);

    CLI::App* vol = app.add_subcommand("vol", "rolling volatility");
    vol->add_option("--input", input, "price CSV");
    vol->add_option("--window,-w", cfg.windows, "window in samples")->expected(1);
    static const std::map<std::string, Mode> vol_modes{{"value", Mode::Value},
                                                       {"return", Mode::Return}};
    vol->add_option("--mode", cfg.mode, "value | return (default: return)")
        ->transform(CLI::CheckedTransformer(vol_modes));
    vol->add_option("--return-kind", cfg.return_kind, "simple | log")
        ->transform(CLI::CheckedTransformer(kReturnKinds));
    add_common(vol);

    CLI::App* beta = app.add_subcommand("beta", "rolling coefficient estimation");
    beta->add_option("--window,-w", cfg.windows, "window in samples")->expected(1);
    add_estimation(beta);
    add_common(beta);

    CLI::App* multibeta = app.add_subcommand("multibeta", "multi-window coefficient estimation");
    multibeta->add_option("--windows", cfg.windows, "comma-separated windows in samples")
        ->delimiter(',');
    add_estimation(multibeta);
    add_common(multibeta);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        std::exit(0);
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        std::exit(0);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (decompose->parsed())
        cfg.command = Command::Decompose;
    else if (rets->parsed())
        cfg.command = Command::Returns;
    else if (vol->parsed()) {
        cfg.command = Command::Vol;
        if (vol->count("--mode") == 0)
            cfg.mode = Mode::Return;
    } else if (beta->parsed())
        cfg.command = Command::Beta;
    else
        cfg.command = Command::Multibeta;

    const bool estimation = cfg.command == Command::Beta || cfg.command == Command::Multibeta;
    if (estimation) {
        if (!target.empty())
            cfg.inputs.push_back(target);
        cfg.inputs.insert(cfg.inputs.end(), factor_files.begin(), factor_files.end());
    } else if (!input.empty()) {
        cfg.inputs.push_back(input);
    }

    // Collect every constraint violation into one message.
    std::vector<std::string> problems;
    if (estimation) {
        if (target.empty())
            problems.push_back("--target is required");
        if (factor_files.empty())
            problems.push_back("at least one --factor is required");
        if (cfg.command == Command::Beta && cfg.windows.size() != 1)
            problems.push_back("exactly one --window is required");
        if (cfg.command == Command::Multibeta && cfg.windows.empty())
            problems.push_back("--windows requires at least one window");
        if (!(cfg.epsilon > 0.0))
            problems.push_back("--epsilon must be > 0");
        if (cfg.vol_window == 1)
            problems.push_back("--vol-window must be >= 2");
    } else {
        if (input.empty())
            problems.push_back("--input is required");
        if (cfg.command != Command::Returns && cfg.windows.size() != 1)
            problems.push_back("exactly one --window is required");
    }
    for (std::size_t w : cfg.windows) {
        if (w < 2)
            problems.push_back("window of " + std::to_string(w) +
                               " samples is too short (need >= 2)");
    }

    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) {
            if (!msg.empty())
                msg += "; ";
            msg += p;
        }
        throw UsageError(msg);
    }
    return cfg;
}

namespace {

struct WorkingData {
    std::vector<Date> dates;        // indexed by global sample index
    std::vector<TimeSeries> series; // target first for estimation commands
};

// Loads the input files, aligns them on common dates, and applies the mode
// transformation. Grid times equal the global (post-alignment) row index, so
// a series value at grid time g belongs to dates[g].
WorkingData prepare(const RunConfig& cfg)
{
    WorkingData wd;
    std::vector<Dataset> datasets;
    datasets.reserve(cfg.inputs.size());
    for (const auto& path : cfg.inputs)
        datasets.push_back(load_csv(path, cfg.column));

    std::vector<std::vector<double>> columns;
    if (datasets.size() == 1) {
        const Dataset& ds = datasets[0];
        if (ds.records.empty())
            throw EmptySeries("'" + cfg.inputs[0] + "' has no data rows");
        std::vector<double> col;
        col.reserve(ds.records.size());
        for (const auto& rec : ds.records) {
            wd.dates.push_back(rec.date);
            col.push_back(rec.value);
        }
        columns.push_back(std::move(col));
    } else {
        AlignedTable table = align(datasets);
        for (std::size_t k = 0; k < datasets.size(); ++k) {
            if (table.dropped[k] > 0)
                std::cerr << "note: dropped " << table.dropped[k] << " rows of '"
                          << table.names[k] << "' without a common date\n";
        }
        wd.dates = std::move(table.dates);
        columns = std::move(table.columns);
    }

    const SamplingGrid grid(0.0, 1.0, wd.dates.size());
    for (auto& col : columns)
        wd.series.emplace_back(grid, std::move(col), SeriesRole::Price);

    if (cfg.mode == Mode::Return || cfg.mode == Mode::Volatility) {
        for (auto& s : wd.series)
            s = returns(s, cfg.return_kind);
    }
    if (cfg.mode == Mode::Volatility) {
        std::size_t wv = cfg.vol_window;
        if (wv == 0) {
            for (std::size_t w : cfg.windows)
                wv = std::max(wv, w);
        }
        for (auto& s : wd.series)
            s = volatility(s, WindowSpec{wv}).series;
    }
    return wd;
}

std::size_t global_index(const TimeSeries& s, std::size_t i)
{
    return static_cast<std::size_t>(std::llround(s.grid.time_at(i)));
}

class OutputFile {
public:
    explicit OutputFile(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw Error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_plot_file(const std::string& prefix, const std::string& name,
                     const std::vector<std::pair<double, double>>& points)
{
    const std::string path = prefix + "_" + name + ".csv";
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    for (const auto& [x, y] : points)
        out << format_value(x) << "," << format_value(y) << "\n";
}

void run_decompose(const RunConfig& cfg, const WorkingData& wd)
{
    const TimeSeries& x = wd.series[0];
    const WindowSpec w{cfg.windows[0]};
    const TimeSeries tr = trend(x, w);
    const TimeSeries fl = fluctuation(x, w);

    OutputFile out(cfg.output);
    out.stream() << "t,date,warmup,value,trend,fluctuation\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t g = global_index(x, i);
        out.stream() << g << "," << wd.dates[g].iso() << "," << (i < tr.warmup ? 1 : 0) << ","
                     << format_value(x.values[i]) << "," << format_value(tr.values[i]) << ","
                     << format_value(fl.values[i]) << "\n";
    }
    if (!cfg.plot_prefix.empty()) {
        std::vector<std::pair<double, double>> tp, fp;
        for (std::size_t i = 0; i < x.size(); ++i) {
            tp.emplace_back(static_cast<double>(global_index(x, i)), tr.values[i]);
            fp.emplace_back(static_cast<double>(global_index(x, i)), fl.values[i]);
        }
        write_plot_file(cfg.plot_prefix, "trend", tp);
        write_plot_file(cfg.plot_prefix, "fluctuation", fp);
    }
}

void run_returns(const RunConfig& cfg, const WorkingData& wd)
{
    const TimeSeries r = returns(wd.series[0], cfg.return_kind);
    OutputFile out(cfg.output);
    out.stream() << "t,date,return\n";
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const std::size_t g = global_index(r, i);
        out.stream() << g << "," << wd.dates[g].iso() << "," << format_value(r.values[i]) << "\n";
        pts.emplace_back(static_cast<double>(g), r.values[i]);
    }
    if (!cfg.plot_prefix.empty())
        write_plot_file(cfg.plot_prefix, "return", pts);
}

void run_vol(const RunConfig& cfg, const WorkingData& wd)
{
    // prepare() already switched to returns when --mode return
    const MomentSeries v = volatility(wd.series[0], WindowSpec{cfg.windows[0]});

    OutputFile out(cfg.output);
    out.stream() << "t,date,warmup,volatility\n";
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < v.series.size(); ++i) {
        const std::size_t g = global_index(v.series, i);
        out.stream() << g << "," << wd.dates[g].iso() << "," << (i < v.series.warmup ? 1 : 0)
                     << "," << format_value(v.series.values[i]) << "\n";
        if (i >= v.series.warmup)
            pts.emplace_back(static_cast<double>(g), v.series.values[i]);
    }
    if (!cfg.plot_prefix.empty())
        write_plot_file(cfg.plot_prefix, "volatility", pts);
}

void run_estimation(const RunConfig& cfg, WorkingData& wd)
{
    TimeSeries target = std::move(wd.series[0]);
    std::vector<TimeSeries> factors(std::make_move_iterator(wd.series.begin() + 1),
                                    std::make_move_iterator(wd.series.end()));
    const std::size_t n = factors.size();
    FactorPanel panel(std::move(target), std::move(factors));

    const IndependenceThreshold thr{cfg.epsilon};
    std::vector<BetaEstimate> estimates;
    if (cfg.command == Command::Beta)
        estimates = rolling_estimate(panel, WindowSpec{cfg.windows[0]}, cfg.model, thr);
    else {
        std::vector<WindowSpec> windows;
        windows.reserve(cfg.windows.size());
        for (std::size_t w : cfg.windows)
            windows.push_back(WindowSpec{w});
        estimates = rolling_multiwindow(panel, windows, cfg.model, thr);
    }

    OutputFile out(cfg.output);
    std::ostream& os = out.stream();
    os << "t,date,warmup,independent,window,alpha";
    for (std::size_t k = 1; k <= n; ++k)
        os << ",beta_" << k;
    os << ",wronskian\n";

    const SamplingGrid& grid = panel.grid();
    const std::size_t first = grid.index_of(estimates.front().at);
    const std::string single_window =
        cfg.command == Command::Beta ? std::to_string(cfg.windows[0]) : std::string();

    for (std::size_t i = 0; i < first; ++i) {
        const std::size_t g = global_index(panel.target(), i);
        os << g << "," << wd.dates[g].iso() << ",1,0," << single_window;
        for (std::size_t k = 0; k < n + 2; ++k) // alpha, betas, wronskian stay empty
            os << ",";
        os << "\n";
    }

    std::vector<std::vector<std::pair<double, double>>> beta_pts(n);
    std::vector<std::pair<double, double>> alpha_pts;
    for (const BetaEstimate& est : estimates) {
        const std::size_t i = grid.index_of(est.at);
        const std::size_t g = global_index(panel.target(), i);
        os << g << "," << wd.dates[g].iso() << ",0," << (est.independent ? 1 : 0) << ","
           << est.window.length_samples;
        if (est.alpha)
            os << "," << format_value(*est.alpha);
        else
            os << ",";
        for (std::size_t k = 0; k < n; ++k) {
            if (est.independent)
                os << "," << format_value(est.betas[k]);
            else
                os << ",";
        }
        os << "," << format_value(est.wronskian) << "\n";

        if (est.independent) {
            for (std::size_t k = 0; k < n; ++k)
                beta_pts[k].emplace_back(static_cast<double>(g), est.betas[k]);
            if (est.alpha)
                alpha_pts.emplace_back(static_cast<double>(g), *est.alpha);
        }
    }

    if (!cfg.plot_prefix.empty()) {
        for (std::size_t k = 0; k < n; ++k)
            write_plot_file(cfg.plot_prefix, "beta_" + std::to_string(k + 1), beta_pts[k]);
        if (cfg.model == ModelKind::WithAlpha)
            write_plot_file(cfg.plot_prefix, "alpha", alpha_pts);
    }
}

} // namespace

int run(const RunConfig& cfg)
{
    try {
        WorkingData wd = prepare(cfg);
        switch (cfg.command) {
        case Command::Decompose:
            run_decompose(cfg, wd);
            break;
        case Command::Returns:
            run_returns(cfg, wd);
            break;
        case Command::Vol:
            run_vol(cfg, wd);
            break;
        case Command::Beta:
        case Command::Multibeta:
            run_estimation(cfg, wd);
            break;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace wronbeta
