// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

// spectra: post-detection RGB/IR fusion, tracking and direction pipeline.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "spectra/bench.hpp"
#include "spectra/commands.hpp"
#include "spectra/config.hpp"
#include "spectra/log.hpp"
#include "spectra/pipeline.hpp"
#include "spectra/synth.hpp"

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    spectra::init_logging();

    CLI::App app{"RGB/IR decision-layer fusion, IoU tracking and direction estimation"};
    app.require_subcommand(1);

    // pipeline
    std::string config_path;
    std::string rgb_log;
    std::string ir_log;
    std::string frames_dir;
    std::string task;
    std::string out;
    std::string metrics;
    bool print_config = false;
    auto* pipeline = app.add_subcommand("pipeline", "fuse, track and estimate direction from detection logs");
    pipeline->add_option("--config", config_path, "key = value config file");
    pipeline->add_option("--rgb-log", rgb_log, "RGB detection log");
    pipeline->add_option("--ir-log", ir_log, "IR detection log");
    pipeline->add_option("--frames-dir", frames_dir, "directory of <stem>_<frame>.pgm frames");
    pipeline->add_option("--task", task, "drone or payload")->check(CLI::IsMember({"drone", "payload"}));
    pipeline->add_option("--out", out, "tracking CSV output");
    pipeline->add_option("--metrics", metrics, "run summary JSON output");
    pipeline->add_flag("--print-config", print_config, "print the effective config and exit");

    // synth
    std::string spec_path;
    std::string synth_out;
    std::optional<std::uint64_t> seed;
    auto* synth = app.add_subcommand("synth", "generate a synthetic scenario");
    synth->add_option("--config", spec_path, "scenario spec JSON")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", seed, "override the spec seed");

    // eval
    std::string preds;
    std::string gt;
    std::string eval_metrics;
    spectra::EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--preds", preds, "detection log or tracking CSV")->required();
    eval->add_option("--gt", gt, "ground truth TSV")->required();
    eval->add_option("--iou", eval_opts.iou_threshold, "IoU threshold for precision/recall")->capture_default_str();
    eval->add_option("--conf", eval_opts.conf_threshold, "confidence operating point")->capture_default_str();
    eval->add_option("--metrics", eval_metrics, "report path; .csv for CSV, JSON otherwise");

    // bench
    std::string bench_config;
    std::string bench_metrics;
    spectra::BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "time the post-detection stages on a synthetic scenario");
    bench->add_option("--config", bench_config, "key = value config file");
    bench->add_option("--objects", bench_opts.objects, "simultaneous objects")->capture_default_str();
    bench->add_option("--frames", bench_opts.frames, "frames per run")->capture_default_str();
    bench->add_option("--reps", bench_opts.repetitions, "repetitions per configuration")->capture_default_str();
    bench->add_option("--seed", bench_opts.seed, "scenario seed")->capture_default_str();
    bench->add_option("--metrics", bench_metrics, "latency report JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pipeline) {
            spectra::PipelineConfig cfg;
            if (!config_path.empty()) cfg = spectra::load_config(config_path);
            if (!rgb_log.empty()) cfg.rgb_log = rgb_log;
            if (!ir_log.empty()) cfg.ir_log = ir_log;
            if (!frames_dir.empty()) cfg.frames_dir = frames_dir;
            if (!task.empty()) cfg.task = *spectra::parse_task(task);
            if (!out.empty()) cfg.out_csv = out;
            if (!metrics.empty()) cfg.metrics = metrics;
            if (print_config) {
                std::cout << spectra::dump_config(cfg);
                return 0;
            }
            const auto s = spectra::run_pipeline(cfg);
            std::cout << "frames          " << s.frames << "\ntracks created  " << s.tracks_created
                      << "\nrows            " << s.rows << "\nmean latency    " << s.mean_latency_ms
                      << " ms/frame\nflow cue        " << (s.flow_enabled ? "on" : "off")
                      << "\nsurrogates      RGB " << spectra::to_string(s.policy.rgb_action) << ", IR "
                      << spectra::to_string(s.policy.ir_action) << '\n';
            if (s.policy.task == spectra::Task::payload_identification) {
                std::cout << "harmful frames  " << s.harmful_frames.size() << '\n';
            }
        } else if (*synth) {
            auto spec = spectra::load_scenario(spec_path);
            if (seed) spec.seed = *seed;
            const auto art = spectra::run_synth(spec, synth_out);
            std::cout << "ground truth    " << art.ground_truth.string() << " (" << art.gt_boxes << " boxes)\n";
            if (art.rgb_log) std::cout << "RGB log         " << art.rgb_log->string() << '\n';
            if (art.ir_log) std::cout << "IR log          " << art.ir_log->string() << '\n';
            std::cout << "detections      " << art.detections << '\n';
            if (art.frames_dir) {
                std::cout << "frames          " << art.frames_dir->string() << " (" << art.frames_written << ")\n";
            }
        } else if (*eval) {
            const auto report = spectra::run_eval(preds, gt, eval_opts);
            std::cout << spectra::eval_text(report);
            if (!eval_metrics.empty()) {
                const bool csv = std::filesystem::path(eval_metrics).extension() == ".csv";
                write_file(eval_metrics, csv ? spectra::eval_csv(report) : spectra::eval_json(report));
            }
        } else if (*bench) {
            spectra::PipelineConfig cfg;
            if (!bench_config.empty()) cfg = spectra::load_config(bench_config);
            const auto report = spectra::run_bench(cfg, bench_opts);
            const std::string json = spectra::bench_json(report);
            std::cout << json << '\n';
            if (!bench_metrics.empty()) write_file(bench_metrics, json);
        }
    } catch (const std::exception& e) {
        spectra::log_error(e.what());
        return 1;
    }
    return 0;
}
