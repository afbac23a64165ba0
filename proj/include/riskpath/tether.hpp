#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "riskpath/grid.hpp"

namespace riskpath {

/// Obstacle-cell corner (integer lattice point in the map frame) where the taut
/// tether wraps. `turn` is the sign of cross(c - prev, next - c) at wrap time.
struct Contact {
  int x = 0;
  int y = 0;
  int turn = 0;

  Point point() const { return {double(x), double(y)}; }
  friend constexpr bool operator==(const Contact&, const Contact&) = default;
};

class TetherInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Taut tether from a reel at the anchor cell center to the robot at the head
/// cell center. Immutable; advance() returns the successor state.
///
/// The contact stack always describes the shortest cable in the homotopy class
/// swept by the robot's walk: each segment of anchor -> contacts -> head has
/// line of sight, and every contact bends the cable around the obstacle
/// material on the inner side of its turn.
class TetherState {
 public:
  /// Throws std::invalid_argument when the anchor is not a free cell.
  static TetherState init(Cell anchor, const OccupancyGrid& grid);
  /// Straight cable from the anchor to a head it can see directly.
  static TetherState straight(Cell anchor, Cell head, const OccupancyGrid& grid);

  /// Move the robot one 8-connected step to `next` (a free cell). Pops contacts
  /// that went slack and pushes corners the cable catches on, in cable order.
  TetherState advance(Cell next, const OccupancyGrid& grid) const;

  Cell anchor_cell() const { return anchor_; }
  Cell head_cell() const { return head_; }
  Point anchor() const { return center_of(anchor_); }
  Point head() const { return center_of(head_); }
  const std::vector<Contact>& contacts() const { return contacts_; }
  std::size_t contact_count() const { return contacts_.size(); }
  double length() const { return length_; }

  /// anchor, contacts..., head.
  std::vector<Point> polyline() const;

  friend bool operator==(const TetherState& a, const TetherState& b) {
    return a.anchor_ == b.anchor_ && a.head_ == b.head_ && a.contacts_ == b.contacts_;
  }

 private:
  TetherState(Cell anchor, Cell head, std::vector<Contact> contacts, double length)
      : anchor_(anchor), head_(head), contacts_(std::move(contacts)), length_(length) {}

  Cell anchor_;
  Cell head_;
  std::vector<Contact> contacts_;
  double length_ = 0.0;
};

/// Tether state after walking `cells` from cells.front(), which is the anchor.
TetherState tether_along(const std::vector<Cell>& cells, const OccupancyGrid& grid);

std::size_t hash_contacts(const std::vector<Contact>& contacts);

}  // namespace riskpath
