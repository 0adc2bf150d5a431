#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcg {

inline constexpr double kNativeSampleRate = 4000.0;

enum class Position { MV, TV, PV, AV, Unknown };
enum class Label { Chd, NonChd, Unlabeled };
enum class DurationClass { S15, S5, S3 };
enum class Sex { Male, Female, Unknown };

std::string_view to_string(Position p) noexcept;
std::string_view to_string(Label l) noexcept;
std::string_view to_string(DurationClass d) noexcept;
std::string_view to_string(Sex s) noexcept;

// Parsers accept the canonical names above (case-insensitive); unknown text
// raises Errc::InvalidSpec.
Position parse_position(std::string_view text);
Label parse_label(std::string_view text);
DurationClass parse_duration(std::string_view text);
Sex parse_sex(std::string_view text);

double duration_seconds(DurationClass d) noexcept;
std::size_t segment_length(DurationClass d, double sample_rate);

// CHD is the positive class throughout: class index 1.
inline int class_index(Label l) noexcept { return l == Label::Chd ? 1 : 0; }
inline Label label_from_class(int c) noexcept { return c == 1 ? Label::Chd : Label::NonChd; }

struct PcgRecording {
    std::vector<double> samples;
    double sample_rate = kNativeSampleRate;
    std::string patient_id;
    Position position = Position::Unknown;
    Label label = Label::Unlabeled;
    int index = 0;

    // Throws Errc::InvalidSpec if sample_rate <= 0 or samples is empty.
    void validate() const;
};

struct Segment {
    std::vector<double> samples;
    DurationClass duration_class = DurationClass::S15;
    double sample_rate = kNativeSampleRate;
    std::string patient_id;
    Position position = Position::Unknown;
    Label label = Label::Unlabeled;
    int recording_index = 0;
    int segment_index = 0;

    // patient_id + position + recording index + segment index,
    // e.g. "P0007_MV_0_s2".
    std::string parent_id() const;
};

// Demographic metadata carried by the corpus manifest.
struct PatientInfo {
    std::string patient_id;
    Label label = Label::Unlabeled;
    std::optional<double> age_years;
    Sex sex = Sex::Unknown;
};

}  // namespace pcg
