// Source locations shared by the frontend, the interpreter trace, and the
// static graphs. A location names a single syntactic construct.
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

namespace cgrl {

struct SourceLoc {
    std::string unit;
    int line = 1;   // 1-based
    int col = 0;    // 0-based
    int evalDepth = 0;

    auto operator<=>(const SourceLoc&) const = default;
    bool operator==(const SourceLoc&) const = default;

    /// "unit:line:col", with an "@eval<depth>" suffix for evaluated code.
    std::string str() const;
};

struct SourceLocHash {
    std::size_t operator()(const SourceLoc& loc) const noexcept;
};

}  // namespace cgrl
