#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmbn {

/// Index of a base station. Index 0 is always the macro base station.
struct NodeId {
  std::size_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kMbs{0};

/// Index of a mobile network operator, in [0, N).
struct MnoId {
  std::size_t value = 0;

  constexpr auto operator<=>(const MnoId&) const = default;
};

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mmbn

template <>
struct std::hash<mmbn::NodeId> {
  std::size_t operator()(const mmbn::NodeId& id) const noexcept { return std::hash<std::size_t>{}(id.value); }
};
