#include "khorbits/sampling.hpp"

namespace khorbits {

const char* to_string(ScanStatus s) {
    switch (s) {
        case ScanStatus::candidate: return "candidate";
        case ScanStatus::closed: return "closed";
        case ScanStatus::abortive_timeout: return "abortive-timeout";
        case ScanStatus::abortive_collision: return "abortive-collision";
        case ScanStatus::abortive_escape: return "abortive-escape";
    }
    return "unknown";
}

std::optional<ScanStatus> scan_status_from_string(std::string_view text) {
    if (text == "candidate") return ScanStatus::candidate;
    if (text == "closed") return ScanStatus::closed;
    if (text == "abortive-timeout") return ScanStatus::abortive_timeout;
    if (text == "abortive-collision") return ScanStatus::abortive_collision;
    if (text == "abortive-escape") return ScanStatus::abortive_escape;
    return std::nullopt;
}

}  // namespace khorbits
