#include "pcg/corpus.hpp"

#include <fstream>
#include <sstream>

#include "pcg/error.hpp"
#include "pcg/wav.hpp"

namespace pcg {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(Errc::Io, path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header) {
        fail(Errc::Io, path.string() + ": unexpected header '" + line + "', expected '" + expected_header + "'");
    }
    const std::size_t width = split_csv_line(expected_header).size();
    std::vector<std::vector<std::string>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != width) {
            fail(Errc::Io, path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) +
                               " fields, got " + std::to_string(fields.size()));
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::map<std::string, PatientInfo> Manifest::patients() const {
    std::map<std::string, PatientInfo> out;
    for (const auto& e : entries) {
        auto [it, inserted] = out.try_emplace(e.patient_id);
        PatientInfo& p = it->second;
        if (inserted) {
            p.patient_id = e.patient_id;
            p.label = e.label;
            p.age_years = e.age_years;
            p.sex = e.sex;
        } else if (p.label != e.label) {
            fail(Errc::MissingMetadata, "patient " + e.patient_id + " has conflicting labels");
        }
    }
    return out;
}

Manifest read_manifest(const std::filesystem::path& corpus_root) {
    Manifest m;
    m.root = corpus_root;
    for (const auto& row : read_csv(corpus_root / "manifest.csv", kManifestHeader)) {
        ManifestEntry e;
        e.patient_id = row[0];
        e.position = parse_position(row[1]);
        e.label = parse_label(row[2]);
        if (!row[3].empty()) e.age_years = std::stod(row[3]);
        e.sex = parse_sex(row[4]);
        e.path = row[5];
        m.entries.push_back(std::move(e));
    }
    return m;
}

void write_manifest(const Manifest& manifest) {
    std::filesystem::create_directories(manifest.root);
    std::ofstream out(manifest.root / "manifest.csv");
    if (!out) fail(Errc::Io, "cannot write manifest in " + manifest.root.string());
    out << kManifestHeader << "\n";
    for (const auto& e : manifest.entries) {
        out << e.patient_id << ',' << to_string(e.position) << ',' << to_string(e.label) << ',';
        if (e.age_years) out << *e.age_years;
        out << ',' << to_string(e.sex) << ',' << e.path << "\n";
    }
}

PcgRecording load_recording(const Manifest& manifest, const ManifestEntry& entry) {
    PcgRecording rec = load_wav(manifest.root / entry.path);
    rec.patient_id = entry.patient_id;
    rec.position = entry.position;
    rec.label = entry.label;
    return rec;
}

}  // namespace pcg
