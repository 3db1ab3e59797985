#pragma once

// Dyadic intervals of [0,1], same-level collections of them, colourings and
// per-node colour counts.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dyad {

// Wide enough for any product of two int64 values.
__extension__ using Wide = __int128;

/// Largest level accepted anywhere; indices then fit comfortably in 64 bits.
inline constexpr int kMaxLevel = 30;

/// The interval [index * 2^-level, (index + 1) * 2^-level].
///
/// Ordering is lexicographic by (level, index), which is the top-down,
/// left-to-right scan order used for diagnostics.
struct DyadicInterval {
  int level = 0;
  std::uint64_t index = 0;

  friend constexpr auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Validating constructor; throws Error(invalid_argument) when index >= 2^level.
[[nodiscard]] DyadicInterval make_interval(int level, std::uint64_t index);

[[nodiscard]] constexpr std::pair<DyadicInterval, DyadicInterval> children(DyadicInterval L) {
  return {{L.level + 1, 2 * L.index}, {L.level + 1, 2 * L.index + 1}};
}

/// Parent of a non-root interval.
[[nodiscard]] constexpr DyadicInterval parent(DyadicInterval I) {
  return {I.level - 1, I.index >> 1};
}

/// The dyadic brother: the other child of parent(I).
[[nodiscard]] constexpr DyadicInterval brother(DyadicInterval I) {
  return {I.level, I.index ^ 1u};
}

/// Ancestor of I at a coarser (or equal) level.
[[nodiscard]] constexpr DyadicInterval ancestor_at(DyadicInterval I, int level) {
  return {level, I.index >> (I.level - level)};
}

/// I is a subset of L.
[[nodiscard]] constexpr bool contains(DyadicInterval L, DyadicInterval I) {
  return I.level >= L.level && (I.index >> (I.level - L.level)) == L.index;
}

/// Mirror image under x -> 1 - x.
[[nodiscard]] constexpr DyadicInterval reflect(DyadicInterval I) {
  return {I.level, ((std::uint64_t{1} << I.level) - 1) - I.index};
}

[[nodiscard]] std::string to_string(DyadicInterval I);

/// Exact positive rational in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num, std::int64_t den);

  [[nodiscard]] std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] std::int64_t den() const noexcept { return den_; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
    const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

[[nodiscard]] std::string to_string(const Rational& r);

/// (eta, d) with 0 < eta <= 1/2 and d >= 1.
class HomogeneityParams {
 public:
  HomogeneityParams(Rational eta, int d);

  [[nodiscard]] const Rational& eta() const noexcept { return eta_; }
  [[nodiscard]] int d() const noexcept { return d_; }

  /// eta * max <= min, in integers.
  [[nodiscard]] bool balanced(long long max_count, long long min_count) const noexcept {
    return static_cast<Wide>(eta_.num()) * max_count <=
           static_cast<Wide>(eta_.den()) * min_count;
  }

  friend bool operator==(const HomogeneityParams&, const HomogeneityParams&) = default;

 private:
  Rational eta_;
  int d_;
};

/// Largest alpha with 2^alpha <= d.
[[nodiscard]] int floor_log2(int d);

/// A duplicate-free collection of intervals from D_level, kept in index order.
class IntervalSet {
 public:
  explicit IntervalSet(int level = 0);
  /// Sorts `indices`; rejects duplicates and out-of-range indices.
  IntervalSet(int level, std::vector<std::uint64_t> indices);

  /// Rejects members whose level differs from `level`.
  static IntervalSet from_intervals(int level, std::span<const DyadicInterval> members);
  /// All of D_level.
  static IntervalSet full(int level);

  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] std::span<const std::uint64_t> indices() const noexcept { return indices_; }

  [[nodiscard]] DyadicInterval operator[](std::size_t pos) const {
    return {level_, indices_[pos]};
  }

  /// Members as DyadicInterval values, left to right.
  [[nodiscard]] auto members() const {
    return indices_ | std::views::transform([lvl = level_](std::uint64_t k) {
             return DyadicInterval{lvl, k};
           });
  }

  [[nodiscard]] bool contains(DyadicInterval I) const;
  [[nodiscard]] std::optional<std::size_t> position(DyadicInterval I) const;

  /// Positions [first, last) of the members inside L (always contiguous).
  [[nodiscard]] std::pair<std::size_t, std::size_t> range_within(DyadicInterval L) const;
  [[nodiscard]] std::size_t count_within(DyadicInterval L) const {
    auto [lo, hi] = range_within(L);
    return hi - lo;
  }

  [[nodiscard]] IntervalSet united(const IntervalSet& other) const;
  [[nodiscard]] IntervalSet minus(const IntervalSet& other) const;
  [[nodiscard]] bool disjoint(const IntervalSet& other) const;
  [[nodiscard]] bool includes(const IntervalSet& other) const;
  [[nodiscard]] bool is_full() const noexcept;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  int level_;
  std::vector<std::uint64_t> indices_;
};

/// Colour labels are 1..d; 0 marks an uncoloured member.
inline constexpr int kUncoloured = 0;

/// A (possibly partial) assignment of colours 1..d to the members of a base set.
class Colouring {
 public:
  Colouring(IntervalSet base, int d);
  Colouring(IntervalSet base, int d, std::vector<int> colours);

  [[nodiscard]] const IntervalSet& base() const noexcept { return base_; }
  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] int level() const noexcept { return base_.level(); }
  [[nodiscard]] std::span<const int> colours() const noexcept { return colours_; }
  [[nodiscard]] int colour_at(std::size_t pos) const { return colours_[pos]; }
  /// nullopt when I is not a member or is still blank.
  [[nodiscard]] std::optional<int> colour_of(DyadicInterval I) const;

  [[nodiscard]] bool total() const noexcept;
  [[nodiscard]] std::size_t coloured_count() const noexcept;

  /// Copy with one member recoloured (or uncoloured with kUncoloured).
  [[nodiscard]] Colouring with(DyadicInterval I, int colour) const;
  /// Copy over base() united with `added`; new members are uncoloured.
  [[nodiscard]] Colouring extended_by(const IntervalSet& added) const;
  /// Copy restricted to members of `subset` (which must be inside base()).
  [[nodiscard]] Colouring restricted_to(const IntervalSet& subset) const;
  /// The coloured members.
  [[nodiscard]] IntervalSet coloured_members() const;
  [[nodiscard]] IntervalSet uncoloured_members() const;

  friend bool operator==(const Colouring&, const Colouring&) = default;

 private:
  IntervalSet base_;
  int d_;
  std::vector<int> colours_;
};

/// Fibre counts of a colouring inside one testing interval.
struct CountTable {
  std::vector<long long> counts;  // counts[i - 1] for colour i
  long long uncoloured = 0;

  [[nodiscard]] long long total() const noexcept;
  friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Counts for the members of `col` inside L. Throws when L.level > col.level().
[[nodiscard]] CountTable count_table(const Colouring& col, DyadicInterval L);

/// Sparse per-node counters for one tree level: only nodes whose cut is
/// nonempty are stored, in increasing index order, `width` cells each.
struct LevelCounts {
  int level = 0;
  int width = 0;
  std::vector<std::uint64_t> index;
  std::vector<std::int32_t> cells;

  [[nodiscard]] std::size_t size() const noexcept { return index.size(); }
  [[nodiscard]] std::span<const std::int32_t> row(std::size_t n) const {
    return {cells.data() + n * static_cast<std::size_t>(width), static_cast<std::size_t>(width)};
  }
  [[nodiscard]] std::optional<std::size_t> find(std::uint64_t idx) const;
};

/// Sums sibling rows into their parents.
[[nodiscard]] LevelCounts coarsen(const LevelCounts& fine);

/// Leaf counters: one row per member, cell `slot(pos)` set to 1.
[[nodiscard]] LevelCounts leaf_counts(const IntervalSet& base, int width,
                                      const std::function<int(std::size_t)>& slot);

/// Visits the aggregated counters of every level from base.level() up to 0.
/// Costs O(width * |base| * levels); only two levels are alive at a time.
void for_each_level_bottom_up(const IntervalSet& base, int width,
                              const std::function<int(std::size_t)>& slot,
                              const std::function<void(const LevelCounts&)>& visit);

/// Colour counts for every node with a nonempty cut, at every level 0..j.
/// Row layout is d colour cells followed by one uncoloured cell.
class CountTree {
 public:
  explicit CountTree(const Colouring& col);

  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] int level() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  [[nodiscard]] const LevelCounts& at_level(int level) const { return levels_.at(level); }
  [[nodiscard]] CountTable table(DyadicInterval L) const;

 private:
  int d_;
  std::vector<LevelCounts> levels_;
};

}  // namespace dyad

template <>
struct std::hash<dyad::DyadicInterval> {
  std::size_t operator()(const dyad::DyadicInterval& I) const noexcept {
    return std::hash<std::uint64_t>{}((I.index << 6) ^ static_cast<std::uint64_t>(I.level));
  }
};
