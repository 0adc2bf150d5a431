#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pcg/types.hpp"

namespace pcg {

// One row of manifest.csv: patient_id,position,label,age_years,sex,path.
// `path` is relative to the corpus root.
struct ManifestEntry {
    std::string patient_id;
    Position position = Position::Unknown;
    Label label = Label::Unlabeled;
    std::optional<double> age_years;
    Sex sex = Sex::Unknown;
    std::string path;
};

struct Manifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;

    // Per-patient demographics. Throws Errc::MissingMetadata if one patient
    // carries conflicting labels.
    std::map<std::string, PatientInfo> patients() const;
};

inline constexpr const char* kManifestHeader = "patient_id,position,label,age_years,sex,path";

Manifest read_manifest(const std::filesystem::path& corpus_root);
void write_manifest(const Manifest& manifest);

// Loads the recording named by a manifest row and attaches its metadata.
PcgRecording load_recording(const Manifest& manifest, const ManifestEntry& entry);

// Minimal CSV helpers shared by the file formats in this project. Fields
// never contain commas or quotes.
std::vector<std::string> split_csv_line(const std::string& line);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header);

}  // namespace pcg
