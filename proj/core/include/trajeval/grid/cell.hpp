#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace trajeval::grid {

/// Integer cell coordinates on the absolute grid. Ordering is row-major
/// (row, then column), which is the cell index order used for rankings.
struct CellId {
  std::int64_t col = 0;
  std::int64_t row = 0;

  friend bool operator==(const CellId&, const CellId&) = default;
  friend std::strong_ordering operator<=>(const CellId& a, const CellId& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

struct CellIdHash {
  std::size_t operator()(const CellId& c) const noexcept {
    const auto h = static_cast<std::uint64_t>(c.col) * 0x9E3779B97F4A7C15ULL ^
                   (static_cast<std::uint64_t>(c.row) + 0x632BE59BD9B4E019ULL);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace trajeval::grid
