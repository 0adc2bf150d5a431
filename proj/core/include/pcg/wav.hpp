#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pcg/types.hpp"

namespace pcg {

enum class WavEncoding { Pcm16, Float32 };

struct WavData {
    std::vector<double> samples;  // rescaled to [-1, 1]
    double sample_rate = 0.0;
    int bits_per_sample = 0;
};

// Mono RIFF/WAVE reader. Accepts 8/16/24-bit integer PCM and 32-bit IEEE
// float (plain or WAVE_FORMAT_EXTENSIBLE). Integer samples are divided by
// the type's maximum magnitude (128, 32768, 8388608).
WavData read_wav(const std::filesystem::path& path);
WavData decode_wav(std::span<const unsigned char> bytes);

// Reads a WAV and fills recording metadata from the canonical corpus layout
// <root>/<patient_id>/<position>_<index>.wav. Labels are not derivable from
// the file name and stay Unlabeled; the manifest supplies them.
PcgRecording load_wav(const std::filesystem::path& path);

// Pcm16 clamps to [-32768, 32767] after rounding x * 32768, so a file read by
// read_wav and written back is bit-identical.
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               double sample_rate, WavEncoding encoding = WavEncoding::Pcm16);
std::vector<unsigned char> encode_wav(std::span<const double> samples, double sample_rate,
                                      WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace pcg
