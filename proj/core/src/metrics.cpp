#include "pcg/metrics.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcg/corpus.hpp"
#include "pcg/error.hpp"

namespace pcg::eval {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
}

ConfusionCounts confusion(const std::vector<Label>& truth, const std::vector<Label>& predicted) {
    if (truth.size() != predicted.size()) fail(Errc::ShapeMismatch, "truth and prediction counts differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == Label::Chd;
        const bool said = predicted[i] == Label::Chd;
        if (actual && said) ++c.tp;
        else if (actual) ++c.fn;
        else if (said) ++c.fp;
        else ++c.tn;
    }
    return c;
}

ConfusionCounts confusion(const std::vector<Prediction>& preds) {
    std::vector<Label> truth, predicted;
    for (const auto& p : preds) {
        truth.push_back(p.label);
        predicted.push_back(p.pred);
    }
    return confusion(truth, predicted);
}

MetricsReport compute_metrics(const ConfusionCounts& c, std::string group) {
    if (c.total() <= 0) fail(Errc::EmptyEvaluation, "no evaluated segments");
    auto ratio = [](long num, long den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    MetricsReport r;
    r.group = std::move(group);
    r.counts = c;
    r.accuracy = ratio(c.tp + c.tn, c.total());
    r.sensitivity = ratio(c.tp, c.tp + c.fn);
    r.specificity = ratio(c.tn, c.tn + c.fp);
    r.precision = ratio(c.tp, c.tp + c.fp);
    if (r.precision && r.sensitivity && (*r.precision + *r.sensitivity) > 0.0) {
        r.f1 = 2.0 * *r.precision * *r.sensitivity / (*r.precision + *r.sensitivity);
    }
    return r;
}

void write_predictions(const std::filesystem::path& csv, const std::vector<Prediction>& preds) {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream out(csv);
    if (!out) fail(Errc::Io, "cannot write " + csv.string());
    out.precision(17);
    out << kPredictionsHeader << "\n";
    for (const auto& p : preds) {
        out << p.segment_id << ',' << p.patient_id << ',' << to_string(p.label) << ',' << to_string(p.pred) << ','
            << p.prob_chd << "\n";
    }
}

std::vector<Prediction> read_predictions(const std::filesystem::path& csv) {
    std::vector<Prediction> out;
    for (const auto& row : read_csv(csv, kPredictionsHeader)) {
        Prediction p;
        p.segment_id = row[0];
        p.patient_id = row[1];
        p.label = parse_label(row[2]);
        p.pred = parse_label(row[3]);
        p.prob_chd = std::stod(row[4]);
        out.push_back(std::move(p));
    }
    return out;
}

std::string age_band(double age_years) {
    if (age_years < 1.0) return "0-1";
    if (age_years < 5.0) return "1-5";
    if (age_years < 10.0) return "5-10";
    return ">10";
}

std::vector<MetricsReport> grouped_metrics(const std::vector<Prediction>& preds,
                                           const std::map<std::string, PatientInfo>& patients, GroupBy group_by) {
    const std::vector<std::string> order =
        group_by == GroupBy::AgeBand ? std::vector<std::string>{"0-1", "1-5", "5-10", ">10"}
                                     : std::vector<std::string>{"M", "F", "U"};
    std::map<std::string, ConfusionCounts> groups;
    for (const auto& p : preds) {
        const auto it = patients.find(p.patient_id);
        if (it == patients.end()) fail(Errc::MissingMetadata, "no metadata for patient " + p.patient_id);
        std::string key;
        if (group_by == GroupBy::AgeBand) {
            if (!it->second.age_years) fail(Errc::MissingMetadata, "no age for patient " + p.patient_id);
            key = age_band(*it->second.age_years);
        } else {
            key = std::string(to_string(it->second.sex));
        }
        groups[key] += confusion({p.label}, {p.pred});
    }
    std::vector<MetricsReport> out;
    for (const auto& key : order) {
        const auto it = groups.find(key);
        if (it != groups.end()) out.push_back(compute_metrics(it->second, key));
    }
    return out;
}

MetricsReport patient_level_metrics(const std::vector<Prediction>& preds) {
    struct Vote {
        Label label = Label::Unlabeled;
        int chd = 0, total = 0;
        double prob_sum = 0.0;
    };
    std::map<std::string, Vote> votes;
    for (const auto& p : preds) {
        auto& v = votes[p.patient_id];
        v.label = p.label;
        v.chd += p.pred == Label::Chd ? 1 : 0;
        ++v.total;
        v.prob_sum += p.prob_chd;
    }
    std::vector<Label> truth, predicted;
    for (const auto& [id, v] : votes) {
        truth.push_back(v.label);
        bool chd = 2 * v.chd > v.total;
        if (2 * v.chd == v.total) chd = v.prob_sum / v.total > 0.5;
        predicted.push_back(chd ? Label::Chd : Label::NonChd);
    }
    return compute_metrics(confusion(truth, predicted), "patient_majority");
}

namespace {

nlohmann::json to_json(const MetricsReport& r) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        if (v) return *v;
        return nullptr;
    };
    nlohmann::json j;
    if (!r.group.empty()) j["group"] = r.group;
    j["n"] = r.counts.total();
    j["tp"] = r.counts.tp;
    j["tn"] = r.counts.tn;
    j["fp"] = r.counts.fp;
    j["fn"] = r.counts.fn;
    j["accuracy"] = opt(r.accuracy);
    j["sensitivity"] = opt(r.sensitivity);
    j["specificity"] = opt(r.specificity);
    j["precision"] = opt(r.precision);
    j["f1"] = opt(r.f1);
    return j;
}

}  // namespace

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& global,
                        const std::optional<MetricsReport>& patient_level, const std::vector<MetricsReport>& by_age,
                        const std::vector<MetricsReport>& by_sex) {
    nlohmann::json j;
    j["segment"] = to_json(global);
    if (patient_level) j["patient_majority"] = to_json(*patient_level);
    j["by_age"] = nlohmann::json::array();
    for (const auto& r : by_age) j["by_age"].push_back(to_json(r));
    j["by_sex"] = nlohmann::json::array();
    for (const auto& r : by_sex) j["by_sex"].push_back(to_json(r));
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace pcg::eval
