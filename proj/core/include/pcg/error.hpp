#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcg {

// Error categories shared by every module. The CLI maps each one to a
// distinct process exit code.
enum class Errc {
    UnsupportedFormat = 1,
    CorruptHeader,
    TooShort,
    InvalidSpec,
    DegenerateSignal,
    ShapeMismatch,
    DegenerateBatch,
    EmptyClass,
    TooFewPatients,
    EmptyEvaluation,
    MissingMetadata,
    InvalidConfig,
    Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace pcg
