#include "dyad/dyadic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dyad/error.hpp"

namespace dyad {

namespace {

void require_level(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw Error(ErrorCode::invalid_argument,
                "level " + std::to_string(level) + " outside [0, " + std::to_string(kMaxLevel) + "]");
  }
}

}  // namespace

DyadicInterval make_interval(int level, std::uint64_t index) {
  require_level(level);
  if (index >= (std::uint64_t{1} << level)) {
    throw Error(ErrorCode::invalid_argument,
                "index " + std::to_string(index) + " outside D_" + std::to_string(level));
  }
  return {level, index};
}

std::string to_string(DyadicInterval I) {
  return "(" + std::to_string(I.level) + "," + std::to_string(I.index) + ")";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) {
    throw Error(ErrorCode::invalid_argument, "rational must have positive numerator and denominator");
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string to_string(const Rational& r) {
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

HomogeneityParams::HomogeneityParams(Rational eta, int d) : eta_(eta), d_(d) {
  if (eta_ > Rational(1, 2)) {
    throw Error(ErrorCode::invalid_argument, "eta must satisfy 0 < eta <= 1/2, got " + to_string(eta_));
  }
  if (d_ < 1) {
    throw Error(ErrorCode::invalid_argument, "d must be positive");
  }
}

int floor_log2(int d) {
  int alpha = 0;
  while ((2LL << alpha) <= d) ++alpha;
  return alpha;
}

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet::IntervalSet(int level) : level_(level) { require_level(level); }

IntervalSet::IntervalSet(int level, std::vector<std::uint64_t> indices)
    : level_(level), indices_(std::move(indices)) {
  require_level(level);
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorCode::invalid_argument, "duplicate interval in collection");
  }
  if (!indices_.empty() && indices_.back() >= (std::uint64_t{1} << level_)) {
    throw Error(ErrorCode::invalid_argument,
                "index " + std::to_string(indices_.back()) + " outside D_" + std::to_string(level_));
  }
}

IntervalSet IntervalSet::from_intervals(int level, std::span<const DyadicInterval> members) {
  std::vector<std::uint64_t> idx;
  idx.reserve(members.size());
  for (const auto& I : members) {
    if (I.level != level) {
      throw Error(ErrorCode::invalid_argument,
                  "interval " + to_string(I) + " is not in D_" + std::to_string(level));
    }
    idx.push_back(I.index);
  }
  return IntervalSet(level, std::move(idx));
}

IntervalSet IntervalSet::full(int level) {
  require_level(level);
  std::vector<std::uint64_t> idx(std::size_t{1} << level);
  std::iota(idx.begin(), idx.end(), std::uint64_t{0});
  return IntervalSet(level, std::move(idx));
}

bool IntervalSet::contains(DyadicInterval I) const { return position(I).has_value(); }

std::optional<std::size_t> IntervalSet::position(DyadicInterval I) const {
  if (I.level != level_) return std::nullopt;
  auto it = std::lower_bound(indices_.begin(), indices_.end(), I.index);
  if (it == indices_.end() || *it != I.index) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

std::pair<std::size_t, std::size_t> IntervalSet::range_within(DyadicInterval L) const {
  if (L.level > level_) return {0, 0};
  const int shift = level_ - L.level;
  const std::uint64_t first = L.index << shift;
  const std::uint64_t last = (L.index + 1) << shift;
  auto lo = std::lower_bound(indices_.begin(), indices_.end(), first);
  auto hi = std::lower_bound(lo, indices_.end(), last);
  return {static_cast<std::size_t>(lo - indices_.begin()),
          static_cast<std::size_t>(hi - indices_.begin())};
}

namespace {

void require_same_level(const IntervalSet& a, const IntervalSet& b) {
  if (a.level() != b.level()) {
    throw Error(ErrorCode::invalid_argument, "collections live on different levels (" +
                                                 std::to_string(a.level()) + " vs " +
                                                 std::to_string(b.level()) + ")");
  }
}

}  // namespace

IntervalSet IntervalSet::united(const IntervalSet& other) const {
  require_same_level(*this, other);
  std::vector<std::uint64_t> out;
  out.reserve(size() + other.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  IntervalSet s(level_);
  s.indices_ = std::move(out);
  return s;
}

IntervalSet IntervalSet::minus(const IntervalSet& other) const {
  require_same_level(*this, other);
  std::vector<std::uint64_t> out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out));
  IntervalSet s(level_);
  s.indices_ = std::move(out);
  return s;
}

bool IntervalSet::disjoint(const IntervalSet& other) const {
  require_same_level(*this, other);
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

bool IntervalSet::includes(const IntervalSet& other) const {
  require_same_level(*this, other);
  return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                       other.indices_.end());
}

bool IntervalSet::is_full() const noexcept {
  return indices_.size() == (std::size_t{1} << level_);
}

// ---------------------------------------------------------------------------
// Colouring

Colouring::Colouring(IntervalSet base, int d)
    : base_(std::move(base)), d_(d), colours_(base_.size(), kUncoloured) {
  if (d_ < 1) throw Error(ErrorCode::invalid_argument, "d must be positive");
}

Colouring::Colouring(IntervalSet base, int d, std::vector<int> colours)
    : base_(std::move(base)), d_(d), colours_(std::move(colours)) {
  if (d_ < 1) throw Error(ErrorCode::invalid_argument, "d must be positive");
  if (colours_.size() != base_.size()) {
    throw Error(ErrorCode::invalid_argument, "colour vector does not match collection size");
  }
  for (std::size_t p = 0; p < colours_.size(); ++p) {
    if (colours_[p] < kUncoloured || colours_[p] > d_) {
      throw Error(ErrorCode::invalid_argument, "colour " + std::to_string(colours_[p]) + " of " +
                                                   to_string(base_[p]) + " outside 1.." +
                                                   std::to_string(d_));
    }
  }
}

std::optional<int> Colouring::colour_of(DyadicInterval I) const {
  auto pos = base_.position(I);
  if (!pos || colours_[*pos] == kUncoloured) return std::nullopt;
  return colours_[*pos];
}

bool Colouring::total() const noexcept {
  return std::none_of(colours_.begin(), colours_.end(), [](int c) { return c == kUncoloured; });
}

std::size_t Colouring::coloured_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(colours_.begin(), colours_.end(), [](int c) { return c != kUncoloured; }));
}

Colouring Colouring::with(DyadicInterval I, int colour) const {
  auto pos = base_.position(I);
  if (!pos) throw Error(ErrorCode::invalid_argument, to_string(I) + " is not in the collection");
  if (colour < kUncoloured || colour > d_) {
    throw Error(ErrorCode::invalid_argument, "colour " + std::to_string(colour) + " outside 1.." +
                                                 std::to_string(d_));
  }
  Colouring out = *this;
  out.colours_[*pos] = colour;
  return out;
}

Colouring Colouring::extended_by(const IntervalSet& added) const {
  IntervalSet merged = base_.united(added);
  std::vector<int> colours(merged.size(), kUncoloured);
  std::size_t p = 0;
  for (std::size_t q = 0; q < merged.size(); ++q) {
    if (p < base_.size() && base_.indices()[p] == merged.indices()[q]) {
      colours[q] = colours_[p++];
    }
  }
  return Colouring(std::move(merged), d_, std::move(colours));
}

Colouring Colouring::restricted_to(const IntervalSet& subset) const {
  if (!base_.includes(subset)) {
    throw Error(ErrorCode::invalid_argument, "restriction target is not a sub-collection");
  }
  std::vector<int> colours;
  colours.reserve(subset.size());
  std::size_t p = 0;
  for (std::uint64_t k : subset.indices()) {
    while (base_.indices()[p] != k) ++p;
    colours.push_back(colours_[p]);
  }
  return Colouring(subset, d_, std::move(colours));
}

IntervalSet Colouring::coloured_members() const {
  std::vector<std::uint64_t> idx;
  for (std::size_t p = 0; p < colours_.size(); ++p) {
    if (colours_[p] != kUncoloured) idx.push_back(base_.indices()[p]);
  }
  return IntervalSet(base_.level(), std::move(idx));
}

IntervalSet Colouring::uncoloured_members() const {
  std::vector<std::uint64_t> idx;
  for (std::size_t p = 0; p < colours_.size(); ++p) {
    if (colours_[p] == kUncoloured) idx.push_back(base_.indices()[p]);
  }
  return IntervalSet(base_.level(), std::move(idx));
}

// ---------------------------------------------------------------------------
// Counting

long long CountTable::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), uncoloured);
}

CountTable count_table(const Colouring& col, DyadicInterval L) {
  if (L.level > col.level()) {
    throw Error(ErrorCode::invalid_argument, "testing interval " + to_string(L) +
                                                 " is finer than the collection level " +
                                                 std::to_string(col.level()));
  }
  CountTable t{std::vector<long long>(static_cast<std::size_t>(col.d()), 0), 0};
  auto [lo, hi] = col.base().range_within(L);
  for (std::size_t p = lo; p < hi; ++p) {
    const int c = col.colour_at(p);
    if (c == kUncoloured) {
      ++t.uncoloured;
    } else {
      ++t.counts[static_cast<std::size_t>(c - 1)];
    }
  }
  return t;
}

std::optional<std::size_t> LevelCounts::find(std::uint64_t idx) const {
  auto it = std::lower_bound(index.begin(), index.end(), idx);
  if (it == index.end() || *it != idx) return std::nullopt;
  return static_cast<std::size_t>(it - index.begin());
}

LevelCounts coarsen(const LevelCounts& fine) {
  LevelCounts out;
  out.level = fine.level - 1;
  out.width = fine.width;
  const auto w = static_cast<std::size_t>(fine.width);
  out.index.reserve(fine.size());
  out.cells.reserve(fine.cells.size());
  for (std::size_t n = 0; n < fine.size(); ++n) {
    const std::uint64_t up = fine.index[n] >> 1;
    if (out.index.empty() || out.index.back() != up) {
      out.index.push_back(up);
      out.cells.insert(out.cells.end(), w, 0);
    }
    auto* dst = out.cells.data() + (out.index.size() - 1) * w;
    const auto* src = fine.cells.data() + n * w;
    for (std::size_t c = 0; c < w; ++c) dst[c] += src[c];
  }
  return out;
}

LevelCounts leaf_counts(const IntervalSet& base, int width,
                        const std::function<int(std::size_t)>& slot) {
  LevelCounts leaves;
  leaves.level = base.level();
  leaves.width = width;
  leaves.index.assign(base.indices().begin(), base.indices().end());
  leaves.cells.assign(base.size() * static_cast<std::size_t>(width), 0);
  for (std::size_t p = 0; p < base.size(); ++p) {
    const int s = slot(p);
    if (s >= 0) leaves.cells[p * static_cast<std::size_t>(width) + static_cast<std::size_t>(s)] = 1;
  }
  return leaves;
}

void for_each_level_bottom_up(const IntervalSet& base, int width,
                              const std::function<int(std::size_t)>& slot,
                              const std::function<void(const LevelCounts&)>& visit) {
  LevelCounts current = leaf_counts(base, width, slot);
  visit(current);
  while (current.level > 0) {
    current = coarsen(current);
    visit(current);
  }
}

CountTree::CountTree(const Colouring& col) : d_(col.d()) {
  levels_.resize(static_cast<std::size_t>(col.level()) + 1);
  const int d = d_;
  for_each_level_bottom_up(
      col.base(), d + 1,
      [&](std::size_t p) {
        const int c = col.colour_at(p);
        return c == kUncoloured ? d : c - 1;
      },
      [&](const LevelCounts& lc) { levels_[static_cast<std::size_t>(lc.level)] = lc; });
}

CountTable CountTree::table(DyadicInterval L) const {
  if (L.level < 0 || L.level > level()) {
    throw Error(ErrorCode::invalid_argument, "testing interval " + to_string(L) +
                                                 " is finer than the collection level " +
                                                 std::to_string(level()));
  }
  CountTable t{std::vector<long long>(static_cast<std::size_t>(d_), 0), 0};
  const auto& lc = levels_[static_cast<std::size_t>(L.level)];
  if (auto n = lc.find(L.index)) {
    auto row = lc.row(*n);
    for (int c = 0; c < d_; ++c) t.counts[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)];
    t.uncoloured = row[static_cast<std::size_t>(d_)];
  }
  return t;
}

}  // namespace dyad
