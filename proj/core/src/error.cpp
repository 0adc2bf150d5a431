#include "pcg/error.hpp"

namespace pcg {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::UnsupportedFormat: return "UnsupportedFormat";
        case Errc::CorruptHeader: return "CorruptHeader";
        case Errc::TooShort: return "TooShort";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::DegenerateSignal: return "DegenerateSignal";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::DegenerateBatch: return "DegenerateBatch";
        case Errc::EmptyClass: return "EmptyClass";
        case Errc::TooFewPatients: return "TooFewPatients";
        case Errc::EmptyEvaluation: return "EmptyEvaluation";
        case Errc::MissingMetadata: return "MissingMetadata";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pcg
