#include <set>

#include "../oracles/oracles.hpp"
#include "helpers.hpp"
#include "pcg/metrics.hpp"
#include "pcg/split.hpp"

using namespace pcg;
using namespace pcg::eval;

namespace {

std::map<std::string, PatientInfo> cohort(int n, double chd_fraction) {
    std::map<std::string, PatientInfo> out;
    const int n_chd = static_cast<int>(std::lround(n * chd_fraction));
    for (int i = 0; i < n; ++i) {
        PatientInfo p;
        p.patient_id = "P" + std::to_string(1000 + i);
        p.label = i < n_chd ? Label::Chd : Label::NonChd;
        p.age_years = (i * 37 % 160) / 10.0;
        p.sex = i % 3 == 0 ? Sex::Female : Sex::Male;
        out[p.patient_id] = p;
    }
    return out;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("worked example 8/2/9/1") {
    const auto r = compute_metrics({8, 9, 1, 2});
    CHECK(*r.accuracy == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(*r.sensitivity == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(*r.specificity == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(*r.precision == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(*r.precision == doctest::Approx(0.8889).epsilon(1e-4));
    CHECK(*r.f1 == doctest::Approx(0.8421).epsilon(1e-4));
}

TEST_CASE("degenerate metric cases") {
    const auto perfect = compute_metrics({5, 5, 0, 0});
    CHECK(*perfect.accuracy == 1.0);
    CHECK(*perfect.sensitivity == 1.0);
    CHECK(*perfect.specificity == 1.0);
    CHECK(*perfect.precision == 1.0);
    CHECK(*perfect.f1 == 1.0);

    const auto all_pos = compute_metrics({5, 0, 5, 0});
    CHECK(*all_pos.sensitivity == 1.0);
    CHECK(*all_pos.specificity == 0.0);
    CHECK(*all_pos.accuracy == 0.5);

    const auto no_pos = compute_metrics({0, 7, 0, 0});
    CHECK_FALSE(no_pos.sensitivity.has_value());
    CHECK_FALSE(no_pos.precision.has_value());
    CHECK_FALSE(no_pos.f1.has_value());
    CHECK(*no_pos.specificity == 1.0);
    CHECK_ERRC(compute_metrics({0, 0, 0, 0}), Errc::EmptyEvaluation);
}

TEST_CASE("metrics agree with a brute-force recount") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 1 + rng.below(60);
        std::vector<int> t, p;
        std::vector<Label> tl, pl;
        for (std::uint64_t i = 0; i < n; ++i) {
            t.push_back(static_cast<int>(rng.below(2)));
            p.push_back(static_cast<int>(rng.below(2)));
            tl.push_back(label_from_class(t.back()));
            pl.push_back(label_from_class(p.back()));
        }
        const auto want = oracle::recount(t, p);
        const auto r = compute_metrics(confusion(tl, pl));
        CHECK(r.counts.tp == want.tp);
        CHECK(r.counts.tn == want.tn);
        CHECK(r.counts.fp == want.fp);
        CHECK(r.counts.fn == want.fn);
        CHECK(std::abs(*r.accuracy - static_cast<double>(want.tp + want.tn) / static_cast<double>(n)) < 1e-12);
        if (r.f1) CHECK(std::abs(*r.f1 - 2 * *r.precision * *r.sensitivity / (*r.precision + *r.sensitivity)) < 1e-12);
    }
}

TEST_CASE("grouped metrics partition the predictions") {
    const auto patients = cohort(40, 0.6);
    std::vector<Prediction> preds;
    Rng rng(4);
    for (const auto& [id, info] : patients) {
        for (int s = 0; s < 3; ++s) {
            preds.push_back({id + "_s" + std::to_string(s), id, info.label,
                             rng.bernoulli(0.8) ? info.label : (info.label == Label::Chd ? Label::NonChd : Label::Chd),
                             0.5});
        }
    }
    const auto global = compute_metrics(confusion(preds));
    for (auto by : {GroupBy::AgeBand, GroupBy::Sex}) {
        const auto groups = grouped_metrics(preds, patients, by);
        ConfusionCounts sum;
        for (const auto& g : groups) {
            sum += g.counts;
            // brute-force recount of this group
            std::vector<int> t, p;
            for (const auto& pr : preds) {
                const auto& info = patients.at(pr.patient_id);
                const std::string key = by == GroupBy::AgeBand ? age_band(*info.age_years) : std::string(to_string(info.sex));
                if (key != g.group) continue;
                t.push_back(class_index(pr.label));
                p.push_back(class_index(pr.pred));
            }
            const auto want = oracle::recount(t, p);
            CHECK(g.counts.tp == want.tp);
            CHECK(g.counts.tn == want.tn);
            CHECK(g.counts.fp == want.fp);
            CHECK(g.counts.fn == want.fn);
        }
        CHECK(sum == global.counts);
    }
    CHECK(age_band(0.5) == "0-1");
    CHECK(age_band(1.0) == "1-5");
    CHECK(age_band(9.99) == "5-10");
    CHECK(age_band(10.0) == ">10");

    // one group -> identical to the global report
    std::map<std::string, PatientInfo> all_male = patients;
    for (auto& [id, info] : all_male) info.sex = Sex::Male;
    const auto single = grouped_metrics(preds, all_male, GroupBy::Sex);
    REQUIRE(single.size() == 1);
    CHECK(single[0].counts == global.counts);
    CHECK(*single[0].accuracy == *global.accuracy);

    auto missing = patients;
    missing.erase(missing.begin());
    CHECK_ERRC(grouped_metrics(preds, missing, GroupBy::Sex), Errc::MissingMetadata);
}

TEST_CASE("patient majority vote") {
    std::vector<Prediction> preds = {
        {"a0", "A", Label::Chd, Label::Chd, 0.9},     {"a1", "A", Label::Chd, Label::Chd, 0.8},
        {"a2", "A", Label::Chd, Label::NonChd, 0.4},  {"b0", "B", Label::NonChd, Label::Chd, 0.7},
        {"b1", "B", Label::NonChd, Label::NonChd, 0.1}, {"b2", "B", Label::NonChd, Label::NonChd, 0.2},
    };
    const auto r = patient_level_metrics(preds);
    CHECK(r.counts.total() == 2);
    CHECK(*r.accuracy == 1.0);
}

TEST_CASE("patient-wise split: disjoint, covering, stratified") {
    const auto patients = cohort(100, 0.63);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = patient_wise_split(patients, 0.05, 0.05, seed);
        std::set<std::string> seen;
        for (const auto* part : {&s.train, &s.val, &s.test}) {
            CHECK_FALSE(part->empty());
            int chd = 0;
            for (const auto& id : *part) {
                CHECK(seen.insert(id).second);
                chd += patients.at(id).label == Label::Chd ? 1 : 0;
            }
            const double frac = static_cast<double>(chd) / static_cast<double>(part->size());
            CHECK(frac >= 0.58);
            CHECK(frac <= 0.68);
        }
        CHECK(seen.size() == patients.size());
        CHECK(s.test.size() == 5);
    }
    const auto a = patient_wise_split(patients, 0.05, 0.05, 3), b = patient_wise_split(patients, 0.05, 0.05, 3);
    CHECK(a.test == b.test);
    CHECK(a.val == b.val);
    CHECK_ERRC(patient_wise_split(cohort(2, 0.5), 0.05, 0.05, 0), Errc::TooFewPatients);
}

TEST_CASE("predictions and split files round trip") {
    testing::TempDir dir("eval_io");
    const std::vector<Prediction> preds = {{"s0", "P1", Label::Chd, Label::NonChd, 0.123456789012345}};
    write_predictions(dir.path() / "p.csv", preds);
    const auto back = read_predictions(dir.path() / "p.csv");
    REQUIRE(back.size() == 1);
    CHECK(back[0].prob_chd == preds[0].prob_chd);
    CHECK(back[0].pred == Label::NonChd);

    const auto split = patient_wise_split(cohort(30, 0.5), 0.1, 0.1, 1);
    write_split((dir.path() / "split.csv").string(), split);
    const auto s2 = read_split((dir.path() / "split.csv").string());
    CHECK(s2.train == split.train);
    CHECK(s2.test == split.test);
}

}  // TEST_SUITE
