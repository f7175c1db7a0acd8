#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace savsim {

// Integer identifier tagged by the kind of entity it names, so a stop id
// cannot be passed where an edge id is expected.
template <class Tag>
struct Id {
  std::int64_t value = -1;

  constexpr Id() = default;
  constexpr explicit Id(std::int64_t v) : value(v) {}

  constexpr bool valid() const { return value >= 0; }
  friend constexpr auto operator<=>(Id, Id) = default;
  friend std::ostream& operator<<(std::ostream& os, Id id) { return os << id.value; }
};

using VertexId = Id<struct VertexTag>;
using EdgeId = Id<struct EdgeTag>;
using StopId = Id<struct StopTag>;
using RequestId = Id<struct RequestTag>;
using SavId = Id<struct SavTag>;

}  // namespace savsim

template <class Tag>
struct std::hash<savsim::Id<Tag>> {
  std::size_t operator()(savsim::Id<Tag> id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};
