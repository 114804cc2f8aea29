#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string_view>

namespace avs {

// Cardinal moves by one grid cell. The enumerator order is the global
// tie-break order used everywhere in planning.
enum class Action : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline constexpr std::size_t kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions{Action::North, Action::East,
                                                             Action::South, Action::West};

struct Offset {
  int dx = 0;
  int dy = 0;
};

// NORTH decreases y.
constexpr Offset offset(Action a) noexcept {
  switch (a) {
    case Action::North: return {0, -1};
    case Action::East: return {1, 0};
    case Action::South: return {0, 1};
    case Action::West: return {-1, 0};
  }
  return {};
}

constexpr std::size_t index_of(Action a) noexcept { return static_cast<std::size_t>(a); }

constexpr std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::North: return "NORTH";
    case Action::East: return "EAST";
    case Action::South: return "SOUTH";
    case Action::West: return "WEST";
  }
  return "?";
}

inline std::optional<Action> parse_action(std::string_view s) noexcept {
  for (Action a : kAllActions) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

// Small value set of actions, iterated in NORTH<EAST<SOUTH<WEST order.
class ActionSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Action;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Action;

    constexpr iterator() = default;
    constexpr iterator(std::uint8_t bits, std::uint8_t pos) : bits_(bits), pos_(pos) { skip(); }

    constexpr Action operator*() const { return static_cast<Action>(pos_); }
    constexpr iterator& operator++() {
      ++pos_;
      skip();
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    constexpr bool operator==(const iterator& o) const { return pos_ == o.pos_; }

   private:
    constexpr void skip() {
      while (pos_ < kNumActions && !(bits_ & (1u << pos_))) ++pos_;
    }
    std::uint8_t bits_ = 0;
    std::uint8_t pos_ = kNumActions;
  };

  constexpr ActionSet() = default;
  constexpr ActionSet(std::initializer_list<Action> actions) {
    for (Action a : actions) insert(a);
  }

  static constexpr ActionSet all() { return ActionSet{0b1111}; }

  constexpr void insert(Action a) { bits_ |= static_cast<std::uint8_t>(1u << index_of(a)); }
  constexpr void erase(Action a) { bits_ &= static_cast<std::uint8_t>(~(1u << index_of(a))); }
  constexpr bool contains(Action a) const { return bits_ & (1u << index_of(a)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  // k-th member in fixed action order; k < size().
  constexpr Action nth(std::size_t k) const {
    for (Action a : *this) {
      if (k-- == 0) return a;
    }
    return Action::North;
  }

  constexpr iterator begin() const { return iterator(bits_, 0); }
  constexpr iterator end() const { return iterator(bits_, kNumActions); }

  constexpr bool operator==(const ActionSet&) const = default;

 private:
  constexpr explicit ActionSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

}  // namespace avs
