#include "pcg/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pcg/error.hpp"

namespace pcg {
namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

}  // namespace

std::string_view to_string(Position p) noexcept {
    switch (p) {
        case Position::MV: return "MV";
        case Position::TV: return "TV";
        case Position::PV: return "PV";
        case Position::AV: return "AV";
        case Position::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string_view to_string(Label l) noexcept {
    switch (l) {
        case Label::Chd: return "CHD";
        case Label::NonChd: return "NON_CHD";
        case Label::Unlabeled: return "UNLABELED";
    }
    return "UNLABELED";
}

std::string_view to_string(DurationClass d) noexcept {
    switch (d) {
        case DurationClass::S15: return "15s";
        case DurationClass::S5: return "5s";
        case DurationClass::S3: return "3s";
    }
    return "15s";
}

std::string_view to_string(Sex s) noexcept {
    switch (s) {
        case Sex::Male: return "M";
        case Sex::Female: return "F";
        case Sex::Unknown: return "U";
    }
    return "U";
}

Position parse_position(std::string_view text) {
    const auto t = upper(text);
    if (t == "MV") return Position::MV;
    if (t == "TV") return Position::TV;
    if (t == "PV") return Position::PV;
    if (t == "AV") return Position::AV;
    if (t == "UNKNOWN" || t.empty()) return Position::Unknown;
    fail(Errc::InvalidSpec, "unknown auscultation position '" + std::string(text) + "'");
}

Label parse_label(std::string_view text) {
    const auto t = upper(text);
    if (t == "CHD" || t == "1") return Label::Chd;
    if (t == "NON_CHD" || t == "NON-CHD" || t == "NONCHD" || t == "0") return Label::NonChd;
    if (t == "UNLABELED" || t.empty()) return Label::Unlabeled;
    fail(Errc::InvalidSpec, "unknown label '" + std::string(text) + "'");
}

DurationClass parse_duration(std::string_view text) {
    const auto t = upper(text);
    if (t == "15S" || t == "S15" || t == "15") return DurationClass::S15;
    if (t == "5S" || t == "S5" || t == "5") return DurationClass::S5;
    if (t == "3S" || t == "S3" || t == "3") return DurationClass::S3;
    fail(Errc::InvalidSpec, "unknown duration class '" + std::string(text) + "' (15s|5s|3s)");
}

Sex parse_sex(std::string_view text) {
    const auto t = upper(text);
    if (t == "M" || t == "MALE") return Sex::Male;
    if (t == "F" || t == "FEMALE") return Sex::Female;
    if (t == "U" || t == "UNKNOWN" || t.empty()) return Sex::Unknown;
    fail(Errc::InvalidSpec, "unknown sex '" + std::string(text) + "'");
}

double duration_seconds(DurationClass d) noexcept {
    switch (d) {
        case DurationClass::S15: return 15.0;
        case DurationClass::S5: return 5.0;
        case DurationClass::S3: return 3.0;
    }
    return 15.0;
}

std::size_t segment_length(DurationClass d, double sample_rate) {
    return static_cast<std::size_t>(std::llround(duration_seconds(d) * sample_rate));
}

void PcgRecording::validate() const {
    if (!(sample_rate > 0.0)) fail(Errc::InvalidSpec, "sample rate must be positive");
    if (samples.empty()) fail(Errc::InvalidSpec, "recording has no samples");
}

std::string Segment::parent_id() const {
    return patient_id + "_" + std::string(to_string(position)) + "_" +
           std::to_string(recording_index) + "_s" + std::to_string(segment_index);
}

}  // namespace pcg
