#include "pcg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "pcg/error.hpp"

namespace pcg {
namespace {

struct Field {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view v) {
    const std::string s = trim(v);
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    fail(Errc::InvalidConfig, std::string(key) + ": expected a number, got '" + s + "'");
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
    const std::string s = trim(v);
    Int out{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(Errc::InvalidConfig, std::string(key) + ": expected an integer, got '" + s + "'");
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

#define PCG_REAL(sec, name, member)                                                        \
    Field { sec, name, [](RunConfig& c, std::string_view v) { c.member = to_double(name, v); }, \
            [](const RunConfig& c) { return fmt(c.member); } }
#define PCG_INT(sec, name, member, type)                                                         \
    Field { sec, name, [](RunConfig& c, std::string_view v) { c.member = to_int<type>(name, v); }, \
            [](const RunConfig& c) { return std::to_string(c.member); } }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        PCG_REAL("quality", "rmssd_threshold", rmssd_threshold),
        PCG_REAL("quality", "zcr_threshold", zcr_threshold),
        PCG_INT("quality", "wavelet_order", wavelet_order, int),
        Field{"segment", "duration",
              [](RunConfig& c, std::string_view v) { c.duration = parse_duration(trim(v)); },
              [](const RunConfig& c) { return std::string(to_string(c.duration)); }},
        PCG_INT("model", "channels", model.channels, int),
        PCG_INT("model", "heads", model.heads, int),
        PCG_INT("model", "ffn", model.ffn, int),
        PCG_REAL("model", "dropout", model.dropout),
        PCG_INT("model", "block1", model.block1, int),
        PCG_INT("model", "block2", model.block2, int),
        PCG_INT("model", "fc_hidden", model.fc_hidden, int),
        PCG_REAL("model", "pe_omega", model.pe_omega),
        PCG_REAL("train", "learning_rate", train.learning_rate),
        PCG_REAL("train", "beta1", train.beta1),
        PCG_REAL("train", "beta2", train.beta2),
        PCG_INT("train", "batch_size", train.batch_size, int),
        PCG_INT("train", "epochs", train.epochs, int),
        PCG_INT("train", "patience", train.patience, int),
        PCG_INT("train", "seed", seed, std::uint64_t),
        PCG_REAL("split", "test_fraction", test_fraction),
        PCG_REAL("split", "val_fraction", val_fraction),
    };
    return table;
}

#undef PCG_REAL
#undef PCG_INT

const Field& find_field(std::string_view key) {
    for (const auto& f : fields()) {
        if (key == f.key) return f;
    }
    fail(Errc::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::validate() const {
    auto check = [](bool ok, const char* what) {
        if (!ok) fail(Errc::InvalidConfig, what);
    };
    check(rmssd_threshold >= 0.0 && rmssd_threshold <= 1.0, "rmssd_threshold must lie in [0, 1]");
    check(zcr_threshold >= 0.0 && zcr_threshold <= 1.0, "zcr_threshold must lie in [0, 1]");
    check(wavelet_order >= 1 && wavelet_order <= 4, "wavelet_order must be 1..4");
    check(model.dropout >= 0.0 && model.dropout < 1.0, "dropout must lie in [0, 1)");
    check(model.channels > 0 && model.heads > 0 && model.channels % model.heads == 0,
          "heads must divide channels");
    check(model.channels % 2 == 0, "channels (d_model) must be even for positional encoding");
    check(model.ffn > 0 && model.fc_hidden > 0, "ffn and fc_hidden must be positive");
    check(model.block1 >= 0 && model.block2 >= 0, "block counts must be non-negative");
    check(model.pe_omega > 0.0, "pe_omega must be positive");
    check(train.learning_rate > 0.0, "learning_rate must be positive");
    check(train.beta1 >= 0.0 && train.beta1 < 1.0 && train.beta2 >= 0.0 && train.beta2 < 1.0,
          "Adam betas must lie in [0, 1)");
    check(train.batch_size >= 2, "batch_size must be >= 2 (batch normalization)");
    check(train.epochs >= 1 && train.patience >= 1, "epochs and patience must be >= 1");
    check(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0, 1)");
    check(val_fraction > 0.0 && val_fraction < 1.0, "val_fraction must lie in (0, 1)");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.emplace_back(f.key);
    return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    find_field(key).set(cfg, value);
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
    return find_field(key).get(cfg);
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": bad section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            fail(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const Field& f = find_field(key);
        if (!section.empty() && section != f.section) {
            fail(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": key '" + key +
                                          "' belongs in section [" + f.section + "]");
        }
        f.set(cfg, std::string_view(t).substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::Io, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        if (section != f.section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

}  // namespace pcg
