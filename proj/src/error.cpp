#include "culinary/error.hpp"

namespace culinary {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::data: return "data";
        case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace culinary
