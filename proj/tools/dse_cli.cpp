#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dse/errors.hpp"
#include "dse/io.hpp"
#include "dse/scenario/config.hpp"
#include "dse/scenario/harness.hpp"
#include "dse/scenario/presets.hpp"
#include "dse/scenario/report.hpp"
#include "dse/scenario/trace.hpp"
#include "dse/simd/batch_step.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using namespace dse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config_path;
    std::string preset;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::string filters;
    std::string attack;
    std::optional<double> alpha;
    unsigned workers = 0;
    bool quiet = false;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

void add_source_options(CLI::App& cmd, Common& c) {
    auto* config = cmd.add_option("--config", c.config_path, "Scenario YAML file")->envname("DSE_CONFIG");
    auto* preset = cmd.add_option("--preset", c.preset, "Shipped preset name (see list-presets)")->envname("DSE_PRESET");
    config->excludes(preset);
    preset->excludes(config);
}

void add_override_options(CLI::App& cmd, Common& c) {
    cmd.add_option("--seed", c.seed, "Base seed (simulation.seed)")->envname("DSE_SEED");
    cmd.add_option("--filters", c.filters, "Comma list of ekf,ckf,sckf")->envname("DSE_FILTERS");
    cmd.add_option("--attack", c.attack, "none|random|dos|replay|fdi (scenario defaults for the kind)")
        ->envname("DSE_ATTACK");
    cmd.add_option("--alpha", c.alpha, "Chi-square false alarm probability")->envname("DSE_ALPHA");
    cmd.add_flag("--quiet", c.quiet, "Do not echo the effective config");
}

ScenarioConfig resolve_config(const Common& c) {
    ScenarioConfig cfg;
    if (!c.config_path.empty()) {
        cfg = load_config(c.config_path);
    } else if (!c.preset.empty()) {
        cfg = load_preset(c.preset);
    } else {
        throw ConfigError("one of --config or --preset is required");
    }
    if (c.seed) {
        cfg.noise.seed = *c.seed;
    }
    if (c.runs) {
        cfg.monte_carlo_runs = *c.runs;
    }
    if (!c.filters.empty()) {
        std::vector<FilterKind> selection;
        for (const std::string& name : split_list(c.filters)) {
            const auto kind = parse_filter(name);
            if (!kind) {
                throw ConfigError("--filters: unknown filter '" + name + "' (valid: ekf, ckf, sckf)");
            }
            if (std::find(selection.begin(), selection.end(), *kind) == selection.end()) {
                selection.push_back(*kind);
            }
        }
        std::sort(selection.begin(), selection.end());
        cfg.filters.selection = selection;
    }
    if (!c.attack.empty()) {
        const auto kind = parse_attack(c.attack);
        if (!kind) {
            throw ConfigError("--attack: unknown kind '" + c.attack + "' (valid: none, random, dos, replay, fdi)");
        }
        if (*kind != cfg.attack.kind) {
            cfg.attack = default_attack(*kind, cfg.horizon);
        }
    }
    if (c.alpha) {
        if (!(*c.alpha > 0.0 && *c.alpha < 1.0)) {
            throw ConfigError("--alpha must lie in (0, 1)");
        }
        cfg.detector.alpha = *c.alpha;
        cfg.detector.chi2_threshold = chi2_threshold_for(cfg.detector.dof, cfg.detector.alpha);
    }
    cfg.validate();
    return cfg;
}

void prepare_out(const Common& c, const ScenarioConfig& cfg) {
    fs::create_directories(c.out);
    const std::string text = to_yaml(cfg);
    write_file_atomic((fs::path(c.out) / "config.yaml").string(), text);
    if (!c.quiet) {
        std::cerr << "# effective config (also in " << (fs::path(c.out) / "config.yaml").string() << ")\n" << text << "\n";
    }
}

int cmd_run(const Common& c, const std::string& format) {
    const ScenarioConfig cfg = resolve_config(c);
    prepare_out(c, cfg);
    const ScenarioResult result = run_scenario(cfg);
    const bool jsonl = format == "jsonl";
    const fs::path trace_path = fs::path(c.out) / (jsonl ? "trace.jsonl" : "trace.csv");
    export_trace(result.trace, trace_path.string(), jsonl ? TraceFormat::jsonl : TraceFormat::csv);
    write_file_atomic((fs::path(c.out) / "metrics.json").string(), metrics_to_json(cfg, result.metrics));
    std::cout << "wrote " << trace_path.string() << " and " << (fs::path(c.out) / "metrics.json").string() << "\n";
    for (const FilterMetrics& m : result.metrics.filters) {
        std::cout << std::setw(5) << filter_name(m.kind) << "  rmse(delta) " << m.rmse[0] << "  mean|e| "
                  << m.mean_error_norm << "\n";
    }
    return kExitOk;
}

int cmd_batch(const Common& c, bool keep_traces) {
    const ScenarioConfig cfg = resolve_config(c);
    prepare_out(c, cfg);
    const MonteCarloResult mc = run_monte_carlo(cfg, MonteCarloOptions{c.workers, keep_traces});
    if (keep_traces) {
        const fs::path dir = fs::path(c.out) / "traces";
        fs::create_directories(dir);
        for (std::size_t i = 0; i < mc.traces.size(); ++i) {
            std::ostringstream name;
            name << "run_" << std::setw(3) << std::setfill('0') << i << ".csv";
            export_trace(mc.traces[i], (dir / name.str()).string(), TraceFormat::csv);
        }
    }
    const fs::path summary = fs::path(c.out) / "summary.json";
    write_file_atomic(summary.string(), monte_carlo_to_json(cfg, mc));
    std::cout << "wrote " << summary.string() << " (" << mc.runs.size() << " runs, simd "
              << simd::level_name(simd::detect_level()) << ")\n";
    for (const auto& [filter, metrics] : mc.aggregate) {
        for (const auto& [name, s] : metrics) {
            if (s.n == 0) {
                continue;
            }
            std::cout << std::setw(5) << filter << "  " << std::left << std::setw(22) << name << std::right
                      << " median " << s.median << "  mean " << s.mean << "  95% CI [" << s.ci_low << ", "
                      << s.ci_high << "]\n";
        }
    }
    return kExitOk;
}

int cmd_calibrate(const Common& c) {
    ScenarioConfig cfg = resolve_config(c);
    fs::create_directories(c.out);
    const CalibrationResult cal = calibrate_detector(cfg, c.workers);
    cfg.detector.euclid_threshold = cal.threshold;

    std::ostringstream text;
    text << "# Euclidean threshold calibrated from " << cal.runs << " attack-free runs of '" << cfg.name
         << "' (base seed " << cfg.noise.seed << ", stride " << kSeedStride << ").\n"
         << "# filter " << filter_name(cfg.calibration.filter) << ", first " << cfg.calibration.skip
         << " s skipped, " << cal.samples << " samples, max d " << std::setprecision(17) << cal.max_d
         << std::setprecision(6) << ".\n"
         << "# threshold = max(" << kCalibrationSafetyFactor << " x " << kCalibrationPercentile
         << "th percentile of d, next double above max d)\n"
         << to_yaml(cfg);
    const fs::path path = fs::path(c.out) / "calibrated.yaml";
    write_file_atomic(path.string(), text.str());
    std::cout << std::setprecision(17) << "euclid_threshold " << cal.threshold << "\nwrote " << path.string()
              << "\n";
    return kExitOk;
}

int cmd_plot(const std::string& trace_path, const std::string& channels, const std::string& out, const Common& c) {
    const ScenarioTrace trace = read_trace_csv(trace_path);
    DetectorConfig detector;
    if (!c.config_path.empty() || !c.preset.empty()) {
        detector = resolve_config(c).detector;
    } else if (c.alpha) {
        detector.alpha = *c.alpha;
        detector.chi2_threshold = chi2_threshold_for(detector.dof, detector.alpha);
    }
    const std::vector<plot::Channel> selected = plot::parse_channels(split_list(channels));
    const std::string svg = plot::render_svg(trace, selected, detector);
    const fs::path path = out.empty() ? fs::path(trace_path).replace_extension(".svg") : fs::path(out);
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    write_file_atomic(path.string(), svg);
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic state estimation of a single-machine infinite-bus system under model uncertainty "
                 "and cyber attacks"};
    app.require_subcommand(1);
    Common common;
    std::string format = "csv";
    bool keep_traces = false;
    std::string trace_path;
    std::string channels;
    std::string plot_out;

    auto* run = app.add_subcommand("run", "Run one seeded scenario; writes trace, metrics.json, config.yaml");
    add_source_options(*run, common);
    add_override_options(*run, common);
    run->add_option("--out", common.out, "Output directory")->envname("DSE_OUT");
    run->add_option("--format", format, "Trace format")->check(CLI::IsMember({"csv", "jsonl"}));

    auto* batch = app.add_subcommand("batch", "Monte-Carlo runs; writes summary.json with confidence intervals");
    add_source_options(*batch, common);
    add_override_options(*batch, common);
    batch->add_option("--out", common.out, "Output directory")->envname("DSE_OUT");
    batch->add_option("--runs", common.runs, "Number of runs (simulation.monte_carlo_runs)")->envname("DSE_RUNS");
    batch->add_option("--workers", common.workers, "Worker threads, 0 = all cores")->envname("DSE_WORKERS");
    batch->add_flag("--traces", keep_traces, "Also write every run's trace CSV");

    auto* calibrate = app.add_subcommand("calibrate", "Calibrate the Euclidean threshold on attack-free runs");
    add_source_options(*calibrate, common);
    add_override_options(*calibrate, common);
    calibrate->add_option("--out", common.out, "Output directory")->envname("DSE_OUT");
    calibrate->add_option("--runs", common.runs, "Number of runs (at least 20)")->envname("DSE_RUNS");
    calibrate->add_option("--workers", common.workers, "Worker threads, 0 = all cores")->envname("DSE_WORKERS");

    auto* plot_cmd = app.add_subcommand("plot", "Render a trace CSV as SVG panels");
    plot_cmd->add_option("trace", trace_path, "Trace CSV written by run or batch")->required();
    plot_cmd->add_option("--channels", channels, "Comma list of " + plot::channel_list() + " (default: states)")
        ->envname("DSE_CHANNELS");
    plot_cmd->add_option("--out", plot_out, "SVG path (default: trace path with .svg)");
    add_source_options(*plot_cmd, common);
    plot_cmd->add_option("--alpha", common.alpha, "Chi-square false alarm probability")->envname("DSE_ALPHA");

    auto* list = app.add_subcommand("list-presets", "List shipped scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(common, format);
        }
        if (*batch) {
            return cmd_batch(common, keep_traces);
        }
        if (*calibrate) {
            return cmd_calibrate(common);
        }
        if (*plot_cmd) {
            return cmd_plot(trace_path, channels, plot_out, common);
        }
        if (*list) {
            for (const std::string& name : preset_names()) {
                std::cout << name << "\n";
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SingularityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
