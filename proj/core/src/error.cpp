#include "mzjm/error.hpp"

namespace mzjm {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::InvalidEffect: return "InvalidEffect";
        case ErrorKind::InvalidStrategy: return "InvalidStrategy";
        case ErrorKind::InvalidInstance: return "InvalidInstance";
        case ErrorKind::NotMeasurable: return "NotMeasurable";
        case ErrorKind::DegenerateDirection: return "DegenerateDirection";
        case ErrorKind::DegenerateFidelity: return "DegenerateFidelity";
    }
    return "Unknown";
}

}  // namespace mzjm
