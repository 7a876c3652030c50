#pragma once

#include <compare>
#include <cstdint>

namespace nbc {

/// A code cell addressed by its notebook's position in Corpus::notebooks
/// (sorted by notebook_id) and its index among that notebook's code cells.
struct SnippetRef {
    std::uint32_t notebook = 0;
    std::uint32_t cell = 0;

    auto operator<=>(const SnippetRef&) const = default;
};

}  // namespace nbc
