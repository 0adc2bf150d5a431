#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "pcg/error.hpp"
#include "pcg/rng.hpp"

namespace testing {

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    pcg::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.uniform(-1.0, 1.0);
    return v;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() / ("pcg_test_" + tag);
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testing

#define CHECK_ERRC(expr, errc)                                   \
    do {                                                         \
        bool thrown_ = false;                                    \
        try {                                                    \
            (void)(expr);                                        \
        } catch (const pcg::Error& e_) {                         \
            thrown_ = true;                                      \
            CHECK_MESSAGE(e_.code() == (errc), e_.what());       \
        }                                                        \
        CHECK_MESSAGE(thrown_, "expected " #errc);               \
    } while (0)
