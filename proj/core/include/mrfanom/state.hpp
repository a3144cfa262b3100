#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mrfanom/field.hpp"

namespace mrfanom {

/// Latent anomaly state of a node: 1 = positive (high), 2 = negative (low), 3 = normal.
enum class State : std::uint8_t { Positive = 1, Negative = 2, Normal = 3 };

inline constexpr std::array<State, 3> kAllStates = {State::Positive, State::Negative,
                                                    State::Normal};

/// 0-based slot for per-state arrays.
constexpr std::size_t slot(State s) noexcept { return static_cast<std::size_t>(s) - 1; }
constexpr State state_from_slot(std::size_t i) noexcept { return static_cast<State>(i + 1); }
constexpr int code(State s) noexcept { return static_cast<int>(s); }

inline std::optional<State> state_from_code(long long c) noexcept {
  if (c < 1 || c > 3) return std::nullopt;
  return static_cast<State>(c);
}

constexpr bool is_anomalous(State s) noexcept { return s != State::Normal; }

/// Latent assignment of every location-year node plus the aggregate (AIMR) node of each year.
struct StateField {
  Field<State> z;
  std::vector<State> z_aimr;

  StateField() = default;
  StateField(std::size_t locations, std::size_t years, State fill = State::Normal)
      : z(locations, years, fill), z_aimr(years, fill) {}

  std::size_t locations() const noexcept { return z.locations(); }
  std::size_t years() const noexcept { return z.years(); }

  friend bool operator==(const StateField&, const StateField&) = default;
};

}  // namespace mrfanom
