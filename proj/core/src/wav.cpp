#include "pcg/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "pcg/error.hpp"

namespace pcg {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData decode_wav(std::span<const unsigned char> bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        fail(Errc::CorruptHeader, "not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::uint32_t size = read_u32(chunk + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16 || body + size > bytes.size()) fail(Errc::CorruptHeader, "truncated fmt chunk");
            const unsigned char* f = bytes.data() + body;
            format = read_u16(f);
            channels = read_u16(f + 2);
            rate = read_u32(f + 4);
            block_align = read_u16(f + 12);
            bits = read_u16(f + 14);
            if (format == kFormatExtensible) {
                if (size < 40) fail(Errc::CorruptHeader, "truncated WAVE_FORMAT_EXTENSIBLE header");
                format = read_u16(f + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (body + size > bytes.size()) fail(Errc::CorruptHeader, "data chunk exceeds file size");
            data = bytes.data() + body;
            data_size = size;
            break;
        }
        pos = body + size + (size & 1u);
    }

    if (!have_fmt) fail(Errc::CorruptHeader, "missing fmt chunk");
    if (data == nullptr) fail(Errc::CorruptHeader, "missing data chunk");
    if (channels != 1) {
        fail(Errc::UnsupportedFormat, "expected mono audio, got " + std::to_string(channels) + " channels");
    }
    if (rate == 0) fail(Errc::CorruptHeader, "sample rate is zero");

    const bool is_int = format == kFormatPcm && (bits == 8 || bits == 16 || bits == 24);
    const bool is_float = format == kFormatFloat && bits == 32;
    if (!is_int && !is_float) {
        fail(Errc::UnsupportedFormat, "unsupported encoding: format " + std::to_string(format) + ", " +
                                          std::to_string(bits) + " bits");
    }
    const std::size_t width = bits / 8;
    if (block_align != width) fail(Errc::CorruptHeader, "block alignment does not match sample width");

    WavData out;
    out.sample_rate = rate;
    out.bits_per_sample = bits;
    const std::size_t n = data_size / width;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* s = data + i * width;
        switch (bits) {
            case 8:
                out.samples[i] = (static_cast<int>(s[0]) - 128) / 128.0;
                break;
            case 16:
                out.samples[i] = static_cast<std::int16_t>(read_u16(s)) / 32768.0;
                break;
            case 24: {
                std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
                if (v & 0x800000) v -= 0x1000000;
                out.samples[i] = v / 8388608.0;
                break;
            }
            case 32: {
                float f;
                const std::uint32_t raw = read_u32(s);
                std::memcpy(&f, &raw, sizeof f);
                out.samples[i] = f;
                break;
            }
        }
    }
    return out;
}

WavData read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_wav(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

PcgRecording load_wav(const std::filesystem::path& path) {
    WavData wav = read_wav(path);
    PcgRecording rec;
    rec.samples = std::move(wav.samples);
    rec.sample_rate = wav.sample_rate;
    rec.patient_id = path.parent_path().filename().string();

    // <position>_<index>.wav; anything else leaves position Unknown.
    const std::string stem = path.stem().string();
    const auto underscore = stem.find('_');
    if (underscore != std::string::npos) {
        try {
            rec.position = parse_position(stem.substr(0, underscore));
            rec.index = std::stoi(stem.substr(underscore + 1));
        } catch (const std::exception&) {
            rec.position = Position::Unknown;
            rec.index = 0;
        }
    }
    rec.validate();
    return rec;
}

std::vector<unsigned char> encode_wav(std::span<const double> samples, double sample_rate,
                                      WavEncoding encoding) {
    if (!(sample_rate > 0.0)) fail(Errc::InvalidSpec, "sample rate must be positive");
    const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint16_t width = bits / 8;
    const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate));
    const auto data_size = static_cast<std::uint32_t>(samples.size() * width);

    std::vector<unsigned char> out;
    out.reserve(44 + data_size);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
    put_u16(out, 1);
    put_u32(out, rate);
    put_u32(out, rate * width);
    put_u16(out, width);
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_size);

    for (double x : samples) {
        if (encoding == WavEncoding::Pcm16) {
            const double scaled = std::clamp(std::nearbyint(x * 32768.0), -32768.0, 32767.0);
            put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
        } else {
            const auto f = static_cast<float>(x);
            std::uint32_t raw;
            std::memcpy(&raw, &f, sizeof raw);
            put_u32(out, raw);
        }
    }
    return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples, double sample_rate,
               WavEncoding encoding) {
    const auto bytes = encode_wav(samples, sample_rate, encoding);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace pcg
