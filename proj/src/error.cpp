#include "psal/error.hpp"

namespace psal {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::invalid_index: return "invalid_index";
        case ErrorCode::shape: return "shape";
        case ErrorCode::domain: return "domain";
        case ErrorCode::state: return "state";
        case ErrorCode::degenerate_population: return "degenerate_population";
        case ErrorCode::ingestion: return "ingestion";
        case ErrorCode::empty_input: return "empty_input";
        case ErrorCode::size_guard: return "size_guard";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

}  // namespace psal
