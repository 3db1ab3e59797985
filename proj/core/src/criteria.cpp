#include "dyad/criteria.hpp"

#include <algorithm>
#include <vector>

namespace dyad {

namespace {

void require_total(const Colouring& col, const HomogeneityParams& params) {
  if (params.d() != col.d()) {
    throw Error(ErrorCode::invalid_argument, "colouring uses d=" + std::to_string(col.d()) +
                                                 " but parameters have d=" +
                                                 std::to_string(params.d()));
  }
  if (!col.total()) {
    throw Error(ErrorCode::invalid_argument, "homogeneity is defined for total colourings only");
  }
}

// Lower (level, index) wins; a coarser level always beats the one kept so far
// because levels are visited fine-to-coarse.
void keep_first(std::optional<Violation>& best, std::optional<Violation> found) {
  if (found) best = std::move(found);
}

}  // namespace

std::optional<Violation> test_counts(DyadicInterval L, std::span<const long long> counts,
                                     const HomogeneityParams& params) {
  const int d = params.d();
  long long total = 0;
  for (long long c : counts) total += c;
  if (total > d) {
    auto mx = std::max_element(counts.begin(), counts.end());
    auto mn = std::min_element(counts.begin(), counts.end());
    if (!params.balanced(*mx, *mn)) {
      Violation v;
      v.kind = ViolationKind::hom2;
      v.testing_interval = L;
      v.max_count = *mx;
      v.min_count = *mn;
      v.argmax_colour = static_cast<int>(mx - counts.begin()) + 1;
      v.argmin_colour = static_cast<int>(mn - counts.begin()) + 1;
      return v;
    }
    return std::nullopt;
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= 2) {
      Violation v;
      v.kind = ViolationKind::hom1;
      v.testing_interval = L;
      v.colour = static_cast<int>(i) + 1;
      v.count = counts[i];
      return v;
    }
  }
  return std::nullopt;
}

CheckResult check_homogeneous_within(const Colouring& col, const HomogeneityParams& params,
                                     DyadicInterval root) {
  require_total(col, params);
  if (root.level > col.level()) {
    throw Error(ErrorCode::invalid_argument, "scan root " + to_string(root) +
                                                 " is finer than the collection level");
  }
  auto [lo, hi] = col.base().range_within(root);
  if (lo == hi) return {};

  const IntervalSet& base = col.base();
  IntervalSet cut(base.level(), std::vector<std::uint64_t>(base.indices().begin() + static_cast<std::ptrdiff_t>(lo),
                                                           base.indices().begin() + static_cast<std::ptrdiff_t>(hi)));
  const int d = params.d();
  const std::size_t offset = lo;
  LevelCounts level = leaf_counts(cut, d, [&](std::size_t p) { return col.colour_at(p + offset) - 1; });

  std::optional<Violation> best;
  std::vector<long long> counts(static_cast<std::size_t>(d));
  auto scan = [&](const LevelCounts& lc) {
    for (std::size_t n = 0; n < lc.size(); ++n) {
      auto row = lc.row(n);
      std::copy(row.begin(), row.end(), counts.begin());
      if (auto v = test_counts({lc.level, lc.index[n]}, counts, params)) {
        keep_first(best, std::move(v));
        return;
      }
    }
  };
  scan(level);
  while (level.level > root.level) {
    level = coarsen(level);
    scan(level);
  }
  if (best) return {false, std::move(best)};
  return {};
}

CheckResult check_homogeneous(const Colouring& col, const HomogeneityParams& params) {
  return check_homogeneous_within(col, params, DyadicInterval{0, 0});
}

CheckResult check_previsible(const IntervalSet& c, const IntervalSet& u, int d) {
  if (c.level() != u.level()) {
    throw Error(ErrorCode::invalid_argument, "C and U live on different levels");
  }
  if (!c.disjoint(u)) {
    throw Error(ErrorCode::invalid_argument, "C and U must be disjoint");
  }
  if (d < 1) throw Error(ErrorCode::invalid_argument, "d must be positive");

  const IntervalSet h = c.united(u);
  std::optional<Violation> best;

  auto heavy_mixed = [d](std::span<const std::int32_t> row) {
    return row[0] + row[1] >= d && row[0] > 0 && row[1] > 0;
  };

  // Each visited level holds children; their parents sit one level up.
  auto scan = [&](const LevelCounts& lc) {
    if (lc.level == 0) return;
    std::size_t n = 0;
    while (n < lc.size()) {
      const std::uint64_t up = lc.index[n] >> 1;
      std::optional<std::size_t> left;
      std::optional<std::size_t> right;
      if ((lc.index[n] & 1u) == 0) {
        left = n++;
        if (n < lc.size() && (lc.index[n] >> 1) == up) right = n++;
      } else {
        right = n++;
      }
      auto h_of = [&](std::optional<std::size_t> k) {
        return k ? lc.row(*k)[0] + lc.row(*k)[1] : 0;
      };
      const std::int32_t h_left = h_of(left);
      const std::int32_t h_right = h_of(right);
      std::optional<DyadicInterval> heavy;
      if (right && h_left < d && heavy_mixed(lc.row(*right))) {
        heavy = DyadicInterval{lc.level, lc.index[*right]};
      } else if (left && h_right < d && heavy_mixed(lc.row(*left))) {
        heavy = DyadicInterval{lc.level, lc.index[*left]};
      }
      if (heavy) {
        Violation v;
        v.kind = ViolationKind::previs;
        v.testing_interval = {lc.level - 1, up};
        v.heavy_child = *heavy;
        keep_first(best, v);
        return;
      }
    }
  };

  for_each_level_bottom_up(
      h, 2, [&](std::size_t p) { return c.contains(h[p]) ? 0 : 1; }, scan);
  if (best) return {false, std::move(best)};
  return {};
}

Colouring colour_modulo_d(const IntervalSet& s, int d, std::span<const int> colour_order) {
  if (d < 1) throw Error(ErrorCode::invalid_argument, "d must be positive");
  std::vector<int> order;
  if (colour_order.empty()) {
    for (int i = 1; i <= d; ++i) order.push_back(i);
  } else {
    order.assign(colour_order.begin(), colour_order.end());
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    bool perm = static_cast<int>(sorted.size()) == d;
    for (int i = 0; perm && i < d; ++i) perm = sorted[static_cast<std::size_t>(i)] == i + 1;
    if (!perm) throw Error(ErrorCode::invalid_argument, "colour order must be a permutation of 1..d");
  }
  std::vector<int> colours(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) colours[l] = order[l % static_cast<std::size_t>(d)];
  return Colouring(s, d, std::move(colours));
}

}  // namespace dyad
