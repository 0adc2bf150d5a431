#include "pcg/feature_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pcg/corpus.hpp"
#include "pcg/error.hpp"

namespace pcg::features {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
    if (m.values.size() != m.rows * m.cols) fail(Errc::ShapeMismatch, "matrix storage does not match its shape");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out.write("PCGF", 4);
    put_u32(out, static_cast<std::uint32_t>(m.rows));
    put_u32(out, static_cast<std::uint32_t>(m.cols));
    std::vector<float> buf(m.values.begin(), m.values.end());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

FeatureMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PCGF", 4) != 0) fail(Errc::CorruptHeader, path.string() + ": bad magic");
    FeatureMatrix m;
    m.rows = get_u32(in);
    m.cols = get_u32(in);
    if (!in) fail(Errc::CorruptHeader, path.string() + ": truncated header");
    std::vector<float> buf(m.rows * m.cols);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) fail(Errc::CorruptHeader, path.string() + ": truncated data");
    m.values.assign(buf.begin(), buf.end());
    return m;
}

void write_feature_index(const std::filesystem::path& csv, const std::vector<FeatureIndexEntry>& entries) {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream out(csv);
    if (!out) fail(Errc::Io, "cannot write " + csv.string());
    out << kFeatureIndexHeader << "\n";
    for (const auto& e : entries) {
        out << e.segment_id << ',' << e.patient_id << ',' << to_string(e.position) << ',' << to_string(e.label)
            << ',' << to_string(e.duration) << ',' << e.path << "\n";
    }
}

std::vector<FeatureIndexEntry> read_feature_index(const std::filesystem::path& csv) {
    std::vector<FeatureIndexEntry> out;
    for (const auto& row : read_csv(csv, kFeatureIndexHeader)) {
        FeatureIndexEntry e;
        e.segment_id = row[0];
        e.patient_id = row[1];
        e.position = parse_position(row[2]);
        e.label = parse_label(row[3]);
        e.duration = parse_duration(row[4]);
        e.path = row[5];
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace pcg::features
