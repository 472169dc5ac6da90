// Command-line front end: single flights, data collection, labeling,
// training, evaluation grids, and report rendering.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "rfl/csv.hpp"
#include "rfl/error_report.hpp"
#include "rfl/experiment.hpp"
#include "rfl/kernels/dense.hpp"
#include "rfl/learning.hpp"
#include "rfl/spline_fit.hpp"
#include "rfl/trajectory.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool payload = false;
    std::string controller = "lee";
    std::string trajectory = "figure8";
    std::string model_path;
    int trials = 0; // 0 -> config default
    bool strict = false;
    std::string simd = "auto";
};

rfl::Config load_config(const CommonArgs& args) {
    rfl::Config cfg =
        args.config_path.empty() ? rfl::Config{} : rfl::Config::load(args.config_path);
    if (args.simd == "scalar") rfl::kernels::select_backend(rfl::kernels::Backend::scalar);
    else if (args.simd == "avx2") rfl::kernels::select_backend(rfl::kernels::Backend::avx2);
    else if (args.simd == "auto") rfl::kernels::select_backend(rfl::kernels::Backend::automatic);
    else throw std::runtime_error("unknown --simd value '" + args.simd + "'");
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file");
    cmd->add_option("--seed", args.seed, "Base random seed");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--simd", args.simd, "Kernel backend: auto|scalar|avx2");
}

std::vector<rfl::FlightLog> load_logs(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("log_", 0) == 0 &&
            entry.path().extension() == ".csv")
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no log_*.csv files in " + dir);
    std::vector<rfl::FlightLog> logs;
    for (const auto& p : paths) logs.push_back(rfl::read_flight_log_csv(p));
    return logs;
}

int cmd_sim(const CommonArgs& args) {
    const rfl::Config cfg = load_config(args);
    rfl::ExperimentSpec spec;
    spec.controller = rfl::controller_variant_from_string(args.controller);
    spec.trajectory = args.trajectory;
    spec.payload = args.payload;
    spec.seed = args.seed;
    rfl::MlpModel model;
    if (!args.model_path.empty()) {
        model = rfl::load_model(args.model_path);
        spec.model = &model;
    }
    const rfl::FlightLog log = rfl::run_trial(spec, args.seed, cfg);
    fs::create_directories(args.out_dir);
    const std::string path = args.out_dir + "/log_" + args.controller + "_" + log.trajectory +
                             "_s" + std::to_string(args.seed) + ".csv";
    rfl::write_flight_log_csv(log, path);
    rfl::write_plot_trace(log, args.out_dir + "/trace_" + args.controller + "_" +
                                   log.trajectory + "_s" + std::to_string(args.seed) + ".csv");
    std::cout << "wrote " << path << "\n";
    if (log.crashed) {
        std::cout << "trial crashed at t=" << log.crash_t << "\n";
        return args.strict ? 1 : 0;
    }
    std::cout << "mean tracking error: " << rfl::tracking_error(log, spec.payload) << " m\n";
    return 0;
}

int cmd_collect(const CommonArgs& args) {
    const rfl::Config cfg = load_config(args);
    const int flights = cfg.get_int("collect.flights", 2);
    rfl::ExperimentSpec spec;
    spec.controller =
        rfl::controller_variant_from_string(cfg.get_string("collect.controller", "indi"));
    spec.trajectory = "random";
    spec.payload = args.payload;
    fs::create_directories(args.out_dir);
    rfl::Config collect_cfg = cfg;
    collect_cfg.set("eval.crash_error_m",
                    cfg.get_string("collect.crash_error_m", "10.0"));
    size_t samples = 0;
    int crashed = 0;
    for (int i = 0; i < flights; ++i) {
        const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
        const rfl::FlightLog log = rfl::run_trial(spec, seed, collect_cfg);
        samples += log.rows.size();
        crashed += log.crashed ? 1 : 0;
        rfl::write_flight_log_csv(log, args.out_dir + "/log_random_s" + std::to_string(seed) +
                                           ".csv");
    }
    std::cout << "collected " << flights << " flights, " << samples << " samples, " << crashed
              << " crashed\n";
    return args.strict && crashed > 0 ? 1 : 0;
}

int cmd_label(const CommonArgs& args, const std::string& logs_dir, const std::string& dataset_out,
              bool raw_labels) {
    const rfl::Config cfg = load_config(args);
    const double knot_spacing = cfg.get_double("label.knot_spacing", 0.1);
    const auto logs = load_logs(logs_dir);
    const rfl::Dataset ds = rfl::make_dataset(
        logs, knot_spacing, raw_labels ? rfl::LabelMode::raw : rfl::LabelMode::spline_smoothed);
    fs::create_directories(fs::path(dataset_out).parent_path().empty()
                               ? "."
                               : fs::path(dataset_out).parent_path().string());
    rfl::save_dataset_csv(ds, dataset_out);
    std::cout << "wrote " << ds.size() << " samples to " << dataset_out << "\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& dataset_path,
              const std::string& model_out, const std::string& report_out) {
    const rfl::Config cfg = load_config(args);
    rfl::TrainConfig tc = rfl::TrainConfig::from_config(cfg);
    tc.seed = args.seed;
    const rfl::Dataset ds = rfl::load_dataset_csv(dataset_path);
    const rfl::TrainResult result = rfl::train(ds, tc);
    rfl::save_model(result.model, model_out);
    if (!report_out.empty()) rfl::write_training_report_csv(result.history, report_out);
    std::cout << "trained on " << ds.size() << " samples ("
              << rfl::kernels::active_backend_name() << " kernels), final train loss "
              << result.history.back().train_loss << ", val loss "
              << result.history.back().val_loss << "\n";
    std::cout << "wrote " << model_out << "\n";
    return 0;
}

int cmd_eval(const CommonArgs& args, const std::vector<std::string>& controllers,
             const std::vector<std::string>& trajectories) {
    const rfl::Config cfg = load_config(args);
    const int trials = args.trials > 0 ? args.trials : cfg.get_int("eval.trials", 10);
    rfl::MlpModel model;
    bool has_model = false;
    if (!args.model_path.empty()) {
        model = rfl::load_model(args.model_path);
        has_model = true;
    }
    std::vector<rfl::ExperimentSpec> specs;
    for (const auto& ctrl : controllers)
        for (const auto& traj : trajectories) {
            rfl::ExperimentSpec spec;
            spec.controller = rfl::controller_variant_from_string(ctrl);
            spec.trajectory = traj;
            spec.payload = args.payload;
            spec.trials = trials;
            spec.seed = args.seed;
            if (spec.controller == rfl::ControllerVariant::ilndi ||
                spec.controller == rfl::ControllerVariant::na_indi) {
                if (!has_model)
                    throw std::runtime_error("eval: --model required for " + ctrl);
                spec.model = &model;
            }
            specs.push_back(spec);
        }
    const auto cells = rfl::run_grid(specs, cfg);
    fs::create_directories(args.out_dir);
    rfl::write_report_csv(cells, args.out_dir + "/report.csv");
    rfl::write_trials_csv(cells, args.out_dir + "/trials.csv");
    rfl::write_report_markdown(cells, args.out_dir + "/report.md");
    std::cout << "wrote " << args.out_dir << "/report.{csv,md} and trials.csv\n";
    int crashes = 0;
    for (const auto& c : cells) crashes += c.crash_count();
    if (crashes > 0) std::cout << crashes << " crashed trials\n";
    return args.strict && crashes > 0 ? 1 : 0;
}

int cmd_report(const CommonArgs& args, const std::string& in_dir, const std::string& format) {
    load_config(args);
    const auto cells = rfl::read_report_csv(in_dir + "/report.csv");
    fs::create_directories(args.out_dir);
    if (format == "markdown") {
        rfl::write_report_markdown(cells, args.out_dir + "/report.md");
        std::cout << "wrote " << args.out_dir << "/report.md\n";
    } else if (format == "csv") {
        rfl::write_report_csv(cells, args.out_dir + "/report_copy.csv");
        std::cout << "wrote " << args.out_dir << "/report_copy.csv\n";
    } else if (format == "plot-data") {
        // Re-render traces from logs sitting next to the report.
        int n = 0;
        for (const auto& entry : fs::directory_iterator(in_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("log_", 0) == 0 && entry.path().extension() == ".csv") {
                const rfl::FlightLog log = rfl::read_flight_log_csv(entry.path().string());
                rfl::write_plot_trace(log, args.out_dir + "/trace_" + name.substr(4));
                ++n;
            }
        }
        std::cout << "wrote " << n << " trace files\n";
    } else {
        throw std::runtime_error("report: unknown format '" + format + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadrotor residual-force flight lab"};
    app.require_subcommand(1);
    CommonArgs args;

    auto* sim = app.add_subcommand("sim", "Run a single closed-loop trial and write its log");
    add_common(sim, args);
    sim->add_option("--controller", args.controller, "lee|indi|indi_pwm|ilndi|na_indi");
    sim->add_option("--trajectory", args.trajectory, "figure8|circle|helix|random|<file.csv>");
    sim->add_option("--model", args.model_path, "Trained model file (ilndi/na_indi)");
    sim->add_flag("--payload", args.payload, "Fly the cable-suspended payload scenario");
    sim->add_flag("--strict", args.strict, "Exit nonzero if the trial crashes");

    auto* collect = app.add_subcommand("collect", "Fly random-waypoint flights and log them");
    add_common(collect, args);
    collect->add_flag("--payload", args.payload, "Collect with the payload attached");
    collect->add_flag("--strict", args.strict, "Exit nonzero if any flight crashes");

    std::string logs_dir = ".", dataset_path = "dataset.csv";
    bool raw_labels = false;
    auto* label = app.add_subcommand("label", "Fit label splines over logged estimates");
    add_common(label, args);
    label->add_option("--logs", logs_dir, "Directory with log_*.csv files");
    label->add_option("--dataset", dataset_path, "Output dataset CSV");
    label->add_flag("--raw-labels", raw_labels, "Skip smoothing; use raw estimates as labels");

    std::string model_out = "model.bin", train_report = "";
    auto* train = app.add_subcommand("train", "Train the residual predictor on a dataset");
    add_common(train, args);
    train->add_option("--data", dataset_path, "Dataset CSV");
    train->add_option("--model-out", model_out, "Output model file");
    train->add_option("--report", train_report, "Optional per-epoch loss CSV");

    std::vector<std::string> controllers{"lee", "indi"};
    std::vector<std::string> trajectories{"figure8"};
    auto* eval = app.add_subcommand("eval", "Run a controller x trajectory grid");
    add_common(eval, args);
    eval->add_option("--controller", controllers, "Controller variants")->delimiter(',');
    eval->add_option("--trajectory", trajectories, "Trajectories")->delimiter(',');
    eval->add_option("--trials", args.trials, "Trials per cell");
    eval->add_option("--model", args.model_path, "Trained model file");
    eval->add_flag("--payload", args.payload, "Payload scenario");
    eval->add_flag("--strict", args.strict, "Exit nonzero if any trial crashes");

    std::string report_in = ".", report_format = "markdown";
    auto* report = app.add_subcommand("report", "Render an existing report");
    add_common(report, args);
    report->add_option("--in", report_in, "Directory holding report.csv / logs");
    report->add_option("--format", report_format, "markdown|csv|plot-data");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_sim(args);
        if (collect->parsed()) return cmd_collect(args);
        if (label->parsed()) return cmd_label(args, logs_dir, dataset_path, raw_labels);
        if (train->parsed()) return cmd_train(args, dataset_path, model_out, train_report);
        if (eval->parsed()) return cmd_eval(args, controllers, trajectories);
        if (report->parsed()) return cmd_report(args, report_in, report_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
