#include "gfq/errors.hpp"

namespace gfq {

const char* category_name(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::parameter: return "parameter";
        case ErrorCategory::config: return "config";
        case ErrorCategory::numerical: return "numerical";
        case ErrorCategory::instability: return "instability";
        case ErrorCategory::convergence: return "convergence";
    }
    return "unknown";
}

}  // namespace gfq
