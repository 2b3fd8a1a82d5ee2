#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace vpa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void format_into(std::ostringstream&) {}
template <typename A, typename... Rest>
void format_into(std::ostringstream& os, A&& a, Rest&&... rest) {
    os << std::forward<A>(a);
    format_into(os, std::forward<Rest>(rest)...);
}
}  // namespace detail

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
    std::ostringstream os;
    detail::format_into(os, std::forward<Args>(args)...);
    throw Error(os.str());
}

template <typename... Args>
void require(bool cond, Args&&... args) {
    if (!cond) fail(std::forward<Args>(args)...);
}

}  // namespace vpa
