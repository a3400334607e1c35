// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/commands.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spectra/detio.hpp"

namespace spectra {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::out | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

std::vector<FrameDetections> only(std::span<const FrameDetections> frames, Modality m) {
    std::vector<FrameDetections> out;
    for (const auto& f : frames) {
        FrameDetections fd;
        fd.frame_index = f.frame_index;
        fd.of(m) = f.of(m);
        out.push_back(std::move(fd));
    }
    return out;
}

bool looks_like_tracking_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        return line == kTrackingCsvHeader;
    }
    return false;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

SynthArtifacts run_synth(const ScenarioSpec& spec, const std::filesystem::path& out_dir) {
    const Scenario sc = generate(spec);
    std::filesystem::create_directories(out_dir);

    SynthArtifacts art;
    art.ground_truth = out_dir / "gt.tsv";
    const auto gts = flatten(sc.truth);
    art.gt_boxes = gts.size();
    {
        auto out = open_out(art.ground_truth);
        write_ground_truth(out, gts);
    }
    for (Modality m : {Modality::RGB, Modality::IR}) {
        if (!spec.modalities.has(m)) continue;
        const auto path = out_dir / (m == Modality::RGB ? "rgb.log" : "ir.log");
        const auto frames = only(sc.detections, m);
        for (const auto& f : frames) art.detections += f.of(m) ? f.of(m)->size() : 0;
        auto out = open_out(path);
        write_detection_log(out, frames);
        (m == Modality::RGB ? art.rgb_log : art.ir_log) = path;
    }
    if (spec.render_frames) {
        art.frames_dir = out_dir / "frames";
        std::filesystem::create_directories(*art.frames_dir);
        for (std::size_t f = 0; f < sc.truth.size(); ++f) {
            write_pgm(frame_path(*art.frames_dir, "frame", static_cast<std::int64_t>(f)),
                      render_frame(sc.truth[f], spec.dims, spec.seed));
            ++art.frames_written;
        }
    }
    return art;
}

std::vector<EvalBox> to_eval_boxes(std::span<const GroundTruthBox> gts) {
    std::vector<EvalBox> out;
    for (const auto& g : gts) out.push_back({g.frame_index, g.class_name, g.bbox, 1.0, g.object_id});
    return out;
}

std::vector<EvalBox> to_eval_boxes(std::span<const FrameDetections> frames) {
    std::vector<EvalBox> out;
    for (const auto& f : frames) {
        for (Modality m : {Modality::RGB, Modality::IR}) {
            if (!f.of(m)) continue;
            for (const auto& d : *f.of(m)) out.push_back({d.frame_index, d.class_name, d.bbox, d.confidence, 0});
        }
    }
    return out;
}

std::vector<EvalBox> to_eval_boxes(std::span<const TrackingRow> rows) {
    std::vector<EvalBox> out;
    for (const auto& r : rows) out.push_back({r.frame_index, r.class_name, r.bbox, r.confidence, r.track_id});
    return out;
}

EvalReport evaluate(std::span<const EvalBox> preds, std::span<const EvalBox> gts, const EvalOptions& opts,
                    bool with_tracks) {
    EvalReport r;
    r.predictions = preds.size();
    r.ground_truth = gts.size();
    r.per_class = count_matches_per_class(preds, gts, opts.iou_threshold, opts.conf_threshold);
    for (const auto& [name, c] : r.per_class) {
        r.micro += c;
        r.per_class_prf[name] = precision_recall_f1(c);
    }
    r.micro_prf = precision_recall_f1(r.micro);
    r.ap50 = average_precision(preds, gts, 0.5);
    r.map50_95 = map_range(preds, gts);
    if (with_tracks) {
        r.id_switches = id_switches(preds, gts, opts.iou_threshold);
    }
    return r;
}

EvalReport run_eval(const std::filesystem::path& preds, const std::filesystem::path& gt,
                    const EvalOptions& opts) {
    std::ifstream gin(gt);
    if (!gin) throw std::runtime_error("cannot open " + gt.string());
    const auto gts = to_eval_boxes(parse_ground_truth(gin));

    std::ifstream pin(preds);
    if (!pin) throw std::runtime_error("cannot open " + preds.string());
    if (looks_like_tracking_csv(preds)) {
        const auto rows = parse_tracking_csv(pin);
        return evaluate(to_eval_boxes(rows), gts, opts, true);
    }
    const auto frames = parse_detection_log(pin);
    return evaluate(to_eval_boxes(frames), gts, opts, false);
}

std::string eval_json(const EvalReport& r) {
    nlohmann::json j;
    auto prf = [](const MatchCounts& c, const PrecisionRecall& p) {
        return nlohmann::json{{"tp", c.tp}, {"fp", c.fp},         {"fn", c.fn},
                              {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
    };
    j["micro"] = prf(r.micro, r.micro_prf);
    for (const auto& [name, c] : r.per_class) j["per_class"][name] = prf(c, r.per_class_prf.at(name));
    j["ap50"] = r.ap50;
    j["map50_95"] = r.map50_95;
    j["predictions"] = r.predictions;
    j["ground_truth"] = r.ground_truth;
    if (r.id_switches) j["id_switches"] = *r.id_switches;
    return j.dump(2);
}

std::string eval_csv(const EvalReport& r) {
    std::ostringstream os;
    os << "scope,tp,fp,fn,precision,recall,f1\n";
    auto row = [&](const std::string& scope, const MatchCounts& c, const PrecisionRecall& p) {
        os << scope << ',' << c.tp << ',' << c.fp << ',' << c.fn << ',' << fmt(p.precision) << ','
           << fmt(p.recall) << ',' << fmt(p.f1) << '\n';
    };
    row("micro", r.micro, r.micro_prf);
    for (const auto& [name, c] : r.per_class) row(name, c, r.per_class_prf.at(name));
    os << "# ap50," << fmt(r.ap50) << "\n# map50_95," << fmt(r.map50_95) << '\n';
    if (r.id_switches) os << "# id_switches," << *r.id_switches << '\n';
    return os.str();
}

std::string eval_text(const EvalReport& r) {
    std::ostringstream os;
    os << "predictions   " << r.predictions << "\nground truth  " << r.ground_truth << '\n'
       << "precision     " << fmt(r.micro_prf.precision) << "\nrecall        " << fmt(r.micro_prf.recall)
       << "\nF1            " << fmt(r.micro_prf.f1) << "\nAP@0.5        " << fmt(r.ap50)
       << "\nmAP@0.5:0.95  " << fmt(r.map50_95) << '\n';
    if (r.id_switches) os << "ID switches   " << *r.id_switches << '\n';
    for (const auto& [name, p] : r.per_class_prf) {
        os << "  " << name << ": P " << fmt(p.precision) << "  R " << fmt(p.recall) << "  F1 " << fmt(p.f1)
           << '\n';
    }
    return os.str();
}

}  // namespace spectra
