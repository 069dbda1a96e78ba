#include "holoscope/error.hpp"

namespace holo {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Residual: return "residual";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

} // namespace holo
