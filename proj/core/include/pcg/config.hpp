#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pcg/types.hpp"

namespace pcg {

struct ModelConfig {
    int in_channels = 39;
    int channels = 32;
    int heads = 2;
    int ffn = 32;
    double dropout = 0.2;
    int block1 = 3;
    int block2 = 2;
    int fc_hidden = 32;
    int classes = 2;
    double pe_omega = 10000.0;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch_size = 32;
    int epochs = 100;
    int patience = 20;
};

struct RunConfig {
    double rmssd_threshold = 0.4;
    double zcr_threshold = 0.4;
    int wavelet_order = 4;
    DurationClass duration = DurationClass::S5;
    ModelConfig model;
    TrainConfig train;
    std::uint64_t seed = 0;
    double test_fraction = 0.05;
    double val_fraction = 0.05;

    // Throws Errc::InvalidConfig on any out-of-range field.
    void validate() const;
};

// Config file format: INI-style sections with one `key = value` per line;
// '#' and ';' start comments. Keys are unique across sections, so each one
// doubles as a CLI flag name (--rmssd_threshold 0.3).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& cfg);

// Every overridable key, in file order.
std::vector<std::string> config_keys();
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);

}  // namespace pcg
