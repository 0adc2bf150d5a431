#include "pcg/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pcg/error.hpp"

namespace pcg::model {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t get_u32(std::istream& in, const std::string& what) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) fail(Errc::CorruptHeader, "checkpoint truncated while reading " + what);
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in, const std::string& what) {
    const std::uint32_t n = get_u32(in, what);
    if (n > (1u << 24)) fail(Errc::CorruptHeader, "implausible string length in " + what);
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) fail(Errc::CorruptHeader, "checkpoint truncated while reading " + what);
    return s;
}

// Row-major flattening of a column-major Eigen matrix.
std::vector<float> flatten(const Matrix& m) {
    std::vector<float> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(static_cast<float>(m(r, c)));
    }
    return out;
}

}  // namespace

std::string architecture_descriptor(const ModelConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "in_channels=" << cfg.in_channels << "\n"
       << "channels=" << cfg.channels << "\n"
       << "heads=" << cfg.heads << "\n"
       << "ffn=" << cfg.ffn << "\n"
       << "dropout=" << cfg.dropout << "\n"
       << "block1=" << cfg.block1 << "\n"
       << "block2=" << cfg.block2 << "\n"
       << "fc_hidden=" << cfg.fc_hidden << "\n"
       << "classes=" << cfg.classes << "\n"
       << "pe_omega=" << cfg.pe_omega << "\n";
    return os.str();
}

ModelConfig parse_architecture(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) fail(Errc::CorruptHeader, std::string("architecture descriptor lacks ") + key);
        return it->second;
    };
    ModelConfig cfg;
    try {
        cfg.in_channels = std::stoi(get("in_channels"));
        cfg.channels = std::stoi(get("channels"));
        cfg.heads = std::stoi(get("heads"));
        cfg.ffn = std::stoi(get("ffn"));
        cfg.dropout = std::stod(get("dropout"));
        cfg.block1 = std::stoi(get("block1"));
        cfg.block2 = std::stoi(get("block2"));
        cfg.fc_hidden = std::stoi(get("fc_hidden"));
        cfg.classes = std::stoi(get("classes"));
        cfg.pe_omega = std::stod(get("pe_omega"));
    } catch (const std::invalid_argument&) {
        fail(Errc::CorruptHeader, "malformed architecture descriptor");
    }
    return cfg;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out.write("PCGM", 4);
    put_u32(out, kCheckpointVersion);
    put_string(out, architecture_descriptor(model.config()));

    const auto params = model.parameters();
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    for (const Parameter* p : params) {
        put_string(out, p->name);
        put_u32(out, static_cast<std::uint32_t>(p->shape.size()));
        for (int d : p->shape) put_u32(out, static_cast<std::uint32_t>(d));
        const auto data = flatten(p->value);
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
    }
    if (!out) fail(Errc::Io, "failed writing " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PCGM", 4) != 0) fail(Errc::CorruptHeader, path.string() + ": not a PCGM checkpoint");
    const std::uint32_t version = get_u32(in, "version");
    if (version != kCheckpointVersion) {
        fail(Errc::UnsupportedFormat, "checkpoint version " + std::to_string(version) + " is not supported");
    }
    Model model(parse_architecture(get_string(in, "architecture")));

    std::map<std::string, Parameter*> by_name;
    for (Parameter* p : model.parameters()) by_name[p->name] = p;

    const std::uint32_t count = get_u32(in, "tensor count");
    if (count != by_name.size()) {
        fail(Errc::CorruptHeader, "checkpoint holds " + std::to_string(count) + " tensors, architecture needs " +
                                      std::to_string(by_name.size()));
    }
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::string name = get_string(in, "tensor name");
        const auto it = by_name.find(name);
        if (it == by_name.end()) fail(Errc::CorruptHeader, "unexpected tensor '" + name + "'");
        Parameter& p = *it->second;
        const std::uint32_t rank = get_u32(in, name + " rank");
        if (rank != p.shape.size()) fail(Errc::CorruptHeader, name + ": rank mismatch");
        for (std::uint32_t d = 0; d < rank; ++d) {
            if (get_u32(in, name + " dims") != static_cast<std::uint32_t>(p.shape[d])) {
                fail(Errc::CorruptHeader, name + ": dimension mismatch");
            }
        }
        std::vector<float> data(static_cast<std::size_t>(p.value.size()));
        in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
        if (!in) fail(Errc::CorruptHeader, name + ": truncated data");
        std::size_t i = 0;
        for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
            for (Eigen::Index c = 0; c < p.value.cols(); ++c) p.value(r, c) = data[i++];
        }
        by_name.erase(it);
    }
    return model;
}

}  // namespace pcg::model
