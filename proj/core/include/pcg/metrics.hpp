#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcg/types.hpp"

namespace pcg::eval {

// CHD is the positive class.
struct ConfusionCounts {
    long tp = 0, tn = 0, fp = 0, fn = 0;

    long total() const noexcept { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept;
    bool operator==(const ConfusionCounts&) const = default;
};

// Ratios with a zero denominator are absent rather than 0.
struct MetricsReport {
    std::string group;  // empty for the global report
    ConfusionCounts counts;
    std::optional<double> accuracy;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> precision;
    std::optional<double> f1;
};

ConfusionCounts confusion(const std::vector<Label>& truth, const std::vector<Label>& predicted);

// Throws Errc::EmptyEvaluation when counts.total() == 0.
MetricsReport compute_metrics(const ConfusionCounts& counts, std::string group = {});

struct Prediction {
    std::string segment_id;
    std::string patient_id;
    Label label = Label::Unlabeled;
    Label pred = Label::Unlabeled;
    double prob_chd = 0.0;
};

inline constexpr const char* kPredictionsHeader = "segment_id,patient_id,label,pred,prob_chd";

void write_predictions(const std::filesystem::path& csv, const std::vector<Prediction>& preds);
std::vector<Prediction> read_predictions(const std::filesystem::path& csv);

ConfusionCounts confusion(const std::vector<Prediction>& preds);

enum class GroupBy { AgeBand, Sex };

// Age bands: [0, 1), [1, 5), [5, 10), >= 10 years.
std::string age_band(double age_years);

// One report per non-empty group, in band order. Throws
// Errc::MissingMetadata if a prediction's patient (or the grouping field)
// is missing.
std::vector<MetricsReport> grouped_metrics(const std::vector<Prediction>& preds,
                                           const std::map<std::string, PatientInfo>& patients, GroupBy group_by);

// Majority vote of segment predictions per patient; a tied vote falls back
// to the mean CHD probability.
MetricsReport patient_level_metrics(const std::vector<Prediction>& preds);

// metrics.json: {"segment": {...}, "patient_majority": {...},
//                "by_age": [...], "by_sex": [...]}
void write_metrics_json(const std::filesystem::path& path, const MetricsReport& global,
                        const std::optional<MetricsReport>& patient_level, const std::vector<MetricsReport>& by_age,
                        const std::vector<MetricsReport>& by_sex);

}  // namespace pcg::eval
