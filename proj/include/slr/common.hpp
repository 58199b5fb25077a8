#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace slr {

// All numeric work in this library is double precision. Gradient checks
// against central finite differences need the head room, and the CPU
// kernels are memory-bound long before the wider lanes of float would pay.

namespace detail {
inline void format_into(std::ostringstream&) {}

template <typename T, typename... Rest>
void format_into(std::ostringstream& os, T&& head, Rest&&... rest) {
    os << head;
    format_into(os, std::forward<Rest>(rest)...);
}
}  // namespace detail

template <typename... Args>
std::string format_msg(Args&&... args) {
    std::ostringstream os;
    detail::format_into(os, std::forward<Args>(args)...);
    return os.str();
}

// Invalid arguments / violated preconditions.
template <typename... Args>
[[noreturn]] void fail_invalid(Args&&... args) {
    throw std::invalid_argument(format_msg(std::forward<Args>(args)...));
}

// Runtime failures (I/O, malformed files, numeric blowups).
template <typename... Args>
[[noreturn]] void fail_runtime(Args&&... args) {
    throw std::runtime_error(format_msg(std::forward<Args>(args)...));
}

}  // namespace slr
