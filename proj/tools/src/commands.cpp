#include "pcg/commands.hpp"

#include <fstream>
#include <map>
#include <set>

#include "pcg/checkpoint.hpp"
#include "pcg/error.hpp"
#include "pcg/feature_io.hpp"
#include "pcg/segment.hpp"
#include "pcg/wav.hpp"

namespace pcg::cli {
namespace {

std::set<std::string> as_set(const std::vector<std::string>& ids) { return {ids.begin(), ids.end()}; }

std::map<std::string, PatientInfo> patients_of(const std::vector<features::FeatureIndexEntry>& index) {
    std::map<std::string, PatientInfo> out;
    for (const auto& e : index) {
        auto [it, inserted] = out.try_emplace(e.patient_id);
        if (inserted) {
            it->second.patient_id = e.patient_id;
            it->second.label = e.label;
        } else if (it->second.label != e.label) {
            fail(Errc::MissingMetadata, "patient " + e.patient_id + " has conflicting labels");
        }
    }
    return out;
}

model::Dataset to_dataset(const std::vector<features::FeatureIndexEntry>& index, const fs::path& base) {
    model::Dataset data;
    data.reserve(index.size());
    for (const auto& e : index) {
        if (e.label == Label::Unlabeled) fail(Errc::MissingMetadata, e.segment_id + " has no label");
        data.push_back({e.segment_id, e.patient_id, class_index(e.label), features::read_matrix(base / e.path)});
    }
    return data;
}

model::Dataset subset(const model::Dataset& data, const std::set<std::string>& patients) {
    model::Dataset out;
    for (const auto& ex : data) {
        if (patients.count(ex.patient_id)) out.push_back(ex);
    }
    return out;
}

model::Model fresh_model(const RunConfig& cfg) {
    model::Model m(cfg.model);
    m.init(Rng(cfg.seed).split("init"));
    return m;
}

}  // namespace

Manifest cmd_gen(const fs::path& corpus, const synth::CorpusSpec& spec) { return synth::generate_corpus(spec, corpus); }

std::vector<SegmentResult> cmd_assess(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    const Manifest manifest = read_manifest(corpus);
    std::vector<SegmentResult> results;
    for (const auto& entry : manifest.entries) {
        const PcgRecording rec = load_recording(manifest, entry);
        for (const auto& seg : split_recording(rec, cfg.duration)) {
            SegmentResult r;
            r.segment_id = seg.parent_id();
            r.patient_id = seg.patient_id;
            r.position = seg.position;
            r.label = seg.label;
            r.duration = seg.duration_class;
            r.quality = quality::assess_quality(seg, {cfg.rmssd_threshold, cfg.zcr_threshold}, cfg.wavelet_order);
            results.push_back(std::move(r));
        }
    }
    write_quality_csv(out_dir / "quality.csv", results);
    return results;
}

std::size_t cmd_preprocess(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    const Manifest manifest = read_manifest(corpus);
    const fs::path dir = out_dir / "preprocessed";
    fs::create_directories(dir);
    std::size_t count = 0;
    for (const auto& entry : manifest.entries) {
        const PcgRecording rec = load_recording(manifest, entry);
        for (const auto& seg : split_recording(rec, cfg.duration)) {
            const auto q = quality::assess_quality(seg, {cfg.rmssd_threshold, cfg.zcr_threshold}, cfg.wavelet_order);
            if (!q.suitable) continue;
            const Segment clean = preprocess_segment(seg);
            write_wav(dir / (seg.parent_id() + ".wav"), clean.samples, clean.sample_rate, WavEncoding::Float32);
            ++count;
        }
    }
    return count;
}

fs::path cmd_features(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir, bool all) {
    cfg.validate();
    const Manifest manifest = read_manifest(corpus);
    PipelineOptions opts;
    opts.features_for_all = all;
    const auto results = process_corpus(manifest, cfg, opts);
    write_quality_csv(out_dir / "quality.csv", results);

    fs::create_directories(out_dir / "features");
    std::vector<features::FeatureIndexEntry> index;
    for (const auto& r : results) {
        if (!r.features) continue;
        features::FeatureIndexEntry e;
        e.segment_id = r.segment_id;
        e.patient_id = r.patient_id;
        e.position = r.position;
        e.label = r.label;
        e.duration = r.duration;
        e.path = "features/" + r.segment_id + ".bin";
        features::write_matrix(out_dir / e.path, *r.features);
        index.push_back(std::move(e));
    }
    const fs::path csv = out_dir / "features.csv";
    features::write_feature_index(csv, index);
    return csv;
}

model::Dataset load_feature_dataset(const fs::path& feature_index) {
    return to_dataset(features::read_feature_index(feature_index), feature_index.parent_path());
}

TrainOutcome cmd_train(const fs::path& feature_index, const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    const auto index = features::read_feature_index(feature_index);
    const model::Dataset all = to_dataset(index, feature_index.parent_path());

    TrainOutcome out;
    out.split = eval::patient_wise_split(patients_of(index), cfg.test_fraction, cfg.val_fraction, cfg.seed);
    const auto train_set = subset(all, as_set(out.split.train));
    const auto val_set = subset(all, as_set(out.split.val));
    if (val_set.empty()) fail(Errc::EmptyEvaluation, "validation split has no suitable segments");

    model::Model m = fresh_model(cfg);
    out.result = model::train(m, train_set, val_set, cfg.train, cfg.seed);

    fs::create_directories(out_dir);
    out.checkpoint = out_dir / "model.ckpt";
    model::save_checkpoint(out.checkpoint, m);
    model::write_training_log((out_dir / "train_log.csv").string(), out.result.log);
    eval::write_split((out_dir / "split.csv").string(), out.split);
    std::ofstream(out_dir / "config.ini") << format_config(cfg);
    return out;
}

std::vector<eval::Prediction> cmd_predict(const fs::path& checkpoint, const fs::path& feature_index,
                                          const fs::path& out_dir, const std::optional<fs::path>& split_csv,
                                          const std::string& split_name) {
    model::Model m = model::load_checkpoint(checkpoint);
    model::Dataset data = load_feature_dataset(feature_index);
    if (split_csv) {
        const auto split = eval::read_split(split_csv->string());
        const std::vector<std::string>* ids = nullptr;
        if (split_name == "train") ids = &split.train;
        else if (split_name == "val") ids = &split.val;
        else if (split_name == "test") ids = &split.test;
        else fail(Errc::InvalidConfig, "unknown split '" + split_name + "'");
        data = subset(data, as_set(*ids));
    }
    if (data.empty()) fail(Errc::EmptyEvaluation, "no segments to predict");

    const auto ev = model::evaluate(m, data, std::vector<double>(static_cast<std::size_t>(m.config().classes), 1.0));
    std::vector<eval::Prediction> preds;
    for (std::size_t i = 0; i < data.size(); ++i) {
        preds.push_back({data[i].segment_id, data[i].patient_id, label_from_class(data[i].label),
                         label_from_class(ev.predicted[i]), ev.prob_chd[i]});
    }
    eval::write_predictions(out_dir / "predictions.csv", preds);
    return preds;
}

eval::MetricsReport cmd_eval(const fs::path& predictions, const std::optional<fs::path>& corpus,
                             const fs::path& out_dir) {
    const auto preds = eval::read_predictions(predictions);
    const auto global = eval::compute_metrics(eval::confusion(preds));
    const auto patient = eval::patient_level_metrics(preds);
    std::vector<eval::MetricsReport> by_age, by_sex;
    if (corpus) {
        const auto patients = read_manifest(*corpus).patients();
        by_age = eval::grouped_metrics(preds, patients, eval::GroupBy::AgeBand);
        by_sex = eval::grouped_metrics(preds, patients, eval::GroupBy::Sex);
    }
    eval::write_metrics_json(out_dir / "metrics.json", global, patient, by_age, by_sex);
    return global;
}

SweepGrid cmd_sweep(const fs::path& corpus, const RunConfig& cfg, const SweepOptions& opts, const fs::path& out_dir) {
    cfg.validate();
    if (!opts.checkpoint && !opts.train_per_cell) {
        fail(Errc::InvalidConfig, "sweep needs a checkpoint or --train-per-cell");
    }
    const Manifest manifest = read_manifest(corpus);
    PipelineOptions popts;
    popts.features_for_all = true;
    const auto results = process_corpus(manifest, cfg, popts);
    const auto split = opts.split_csv
                           ? eval::read_split(opts.split_csv->string())
                           : eval::patient_wise_split(manifest.patients(), cfg.test_fraction, cfg.val_fraction, cfg.seed);
    const auto test_ids = as_set(split.test);

    std::optional<model::Model> reused;
    if (opts.checkpoint) reused = model::load_checkpoint(*opts.checkpoint);

    auto scorer = [&](const std::vector<SegmentResult>& gated) -> std::optional<double> {
        const auto test_set = make_dataset(gated, test_ids);
        if (test_set.size() < std::max<std::size_t>(1, opts.min_cell_segments)) return std::nullopt;
        if (!opts.train_per_cell) {
            return model::evaluate(*reused, test_set, {1.0, 1.0}).accuracy;
        }
        const auto train_set = make_dataset(gated, as_set(split.train));
        const auto val_set = make_dataset(gated, as_set(split.val));
        if (train_set.empty() || val_set.empty()) return std::nullopt;
        std::set<int> classes;
        for (const auto& ex : train_set) classes.insert(ex.label);
        if (classes.size() < 2) return std::nullopt;
        model::Model m = fresh_model(cfg);
        const auto res = model::train(m, train_set, val_set, cfg.train, cfg.seed);
        return model::evaluate(m, test_set, res.class_weights).accuracy;
    };

    const SweepGrid grid = run_sweep(results, scorer);
    write_sweep_csv(out_dir / "sweep_grid.csv", grid);
    write_sweep_matrix(out_dir / "sweep_accuracy.csv", grid, SweepValue::Accuracy);
    write_sweep_matrix(out_dir / "sweep_fraction.csv", grid, SweepValue::FractionSuitable);
    return grid;
}

std::size_t cmd_activations(const fs::path& checkpoint, const fs::path& feature_index, const fs::path& out_dir,
                            std::size_t limit) {
    model::Model m = model::load_checkpoint(checkpoint);
    const auto index = features::read_feature_index(feature_index);
    std::size_t count = 0;
    for (const auto& e : index) {
        if (limit != 0 && count == limit) break;
        const auto fm = features::read_matrix(feature_index.parent_path() / e.path);
        const features::FeatureMatrix* items[] = {&fm};
        const auto acts = m.activations(model::make_batch(items), 1);
        const fs::path dir = out_dir / "activations" / e.segment_id;
        fs::create_directories(dir);
        auto dump = [&](const model::Matrix& a, const std::string& name) {
            features::FeatureMatrix out;
            out.rows = static_cast<std::size_t>(a.rows());
            out.cols = static_cast<std::size_t>(a.cols());
            out.values.resize(out.rows * out.cols);
            for (std::size_t r = 0; r < out.rows; ++r) {
                for (std::size_t c = 0; c < out.cols; ++c) out.at(r, c) = a(Eigen::Index(r), Eigen::Index(c));
            }
            features::write_matrix(dir / (name + ".bin"), out);
        };
        const auto& act = acts.front();
        for (std::size_t l = 0; l < act.transformer.size(); ++l) dump(act.transformer[l], "transformer" + std::to_string(l + 1));
        dump(model::Matrix(act.pooled), "pooled");
        ++count;
    }
    return count;
}

}  // namespace pcg::cli
