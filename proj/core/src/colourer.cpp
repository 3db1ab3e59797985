#include "dyad/colourer.hpp"

#include <algorithm>
#include <numeric>

namespace dyad {

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::start_blank: return "I.1";
    case CaseLabel::start_complete: return "I.2";
    case CaseLabel::blank: return "II.1";
    case CaseLabel::both_heavy: return "II.2.A.1";
    case CaseLabel::both_light: return "II.2.A.2";
    case CaseLabel::left_light: return "II.2.A.3";
    case CaseLabel::right_light: return "II.2.A.4";
    case CaseLabel::seeded_both_heavy: return "II.2.B.1";
    case CaseLabel::seeded_both_light: return "II.2.B.2";
    case CaseLabel::seeded_empty_light: return "II.2.B.3";
    case CaseLabel::seeded_empty_heavy: return "II.2.B.4";
  }
  return "?";
}

CaseDispatch dispatch_case(const ChildCounts& k, int d) {
  if (k.c_left < 0 || k.c_right < 0 || k.c_left > k.h_left || k.c_right > k.h_right) {
    throw Error(ErrorCode::invalid_argument, "inconsistent child counts");
  }
  if (d < 1) throw Error(ErrorCode::invalid_argument, "d must be positive");
  const long long h = k.h_left + k.h_right;
  const long long c = k.c_left + k.c_right;
  if (h < d || c == 0) return {CaseLabel::blank, false};

  if (k.c_left > 0 && k.c_right > 0) {
    if (k.h_left >= d && k.h_right >= d) return {CaseLabel::both_heavy, false};
    if (k.h_left < d && k.h_right < d) return {CaseLabel::both_light, false};
    if (k.h_left < d) return {CaseLabel::left_light, false};
    return {CaseLabel::right_light, false};
  }

  const bool mirrored = k.c_left > 0;
  const long long h_empty = mirrored ? k.h_right : k.h_left;
  const long long h_other = mirrored ? k.h_left : k.h_right;
  if (h_empty >= d && h_other >= d) return {CaseLabel::seeded_both_heavy, mirrored};
  if (h_empty < d && h_other < d) return {CaseLabel::seeded_both_light, mirrored};
  if (h_empty < d) return {CaseLabel::seeded_empty_light, mirrored};
  return {CaseLabel::seeded_empty_heavy, mirrored};
}

namespace {

struct Cut {
  std::size_t lo = 0;
  std::size_t hi = 0;
  [[nodiscard]] std::size_t size() const noexcept { return hi - lo; }
};

[[noreturn]] void breach(const std::string& what) {
  throw Error(ErrorCode::internal, "colourer self-check failed: " + what);
}

std::vector<int> iota_colours(int from, int to) {
  std::vector<int> out;
  for (int i = from; i <= to; ++i) out.push_back(i);
  return out;
}

void append(std::vector<int>& dst, const std::vector<int>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

class Extender {
 public:
  Extender(const Colouring& c_col, const IntervalSet& u, const HomogeneityParams& params,
           const ColourerOptions& options)
      : j_(c_col.level()), d_(params.d()), params_(params), options_(options) {
    const IntervalSet h = c_col.base().united(u);
    idx_.assign(h.indices().begin(), h.indices().end());
    in_c_.resize(idx_.size());
    colour_.resize(idx_.size(), kUncoloured);
    for (std::size_t p = 0; p < idx_.size(); ++p) {
      if (auto pos = c_col.base().position(h[p])) {
        in_c_[p] = 1;
        colour_[p] = c_col.colour_at(*pos);
      }
    }
  }

  Colouring run() {
    const int s0 = std::max(0, j_ - floor_log2(d_));
    for_each_node(s0, [&](DyadicInterval K, Cut cut) { start(K, cut); });
    check_stage(s0);
    for (int nu = s0 - 1; nu >= 0; --nu) {
      for_each_node(nu, [&](DyadicInterval L, Cut cut) { step(L, cut); });
      check_stage(nu);
    }
    finish_root();

    std::vector<std::uint64_t> idx = idx_;
    return Colouring(IntervalSet(j_, std::move(idx)), d_, colour_);
  }

 private:
  // --- cut helpers -------------------------------------------------------

  Cut cut_of(DyadicInterval L) const {
    const int shift = j_ - L.level;
    auto lo = std::lower_bound(idx_.begin(), idx_.end(), L.index << shift);
    auto hi = std::lower_bound(lo, idx_.end(), (L.index + 1) << shift);
    return {static_cast<std::size_t>(lo - idx_.begin()), static_cast<std::size_t>(hi - idx_.begin())};
  }

  long long c_count(Cut cut) const {
    return std::count(in_c_.begin() + static_cast<std::ptrdiff_t>(cut.lo),
                      in_c_.begin() + static_cast<std::ptrdiff_t>(cut.hi), 1);
  }

  long long u_count(Cut cut) const { return static_cast<long long>(cut.size()) - c_count(cut); }

  bool has_blank_u(Cut cut) const {
    for (std::size_t p = cut.lo; p < cut.hi; ++p) {
      if (!in_c_[p] && colour_[p] == kUncoloured) return true;
    }
    return false;
  }

  bool has_coloured_u(Cut cut) const {
    for (std::size_t p = cut.lo; p < cut.hi; ++p) {
      if (!in_c_[p] && colour_[p] != kUncoloured) return true;
    }
    return false;
  }

  /// Colours of the C-members in the cut, ascending.
  std::vector<int> c_colours(Cut cut) const {
    std::vector<int> out;
    for (std::size_t p = cut.lo; p < cut.hi; ++p) {
      if (in_c_[p]) out.push_back(colour_[p]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Count per colour of every coloured member (C or U) in the cut; index 0 unused.
  std::vector<long long> colour_counts(Cut cut, bool c_only = false) const {
    std::vector<long long> counts(static_cast<std::size_t>(d_) + 1, 0);
    for (std::size_t p = cut.lo; p < cut.hi; ++p) {
      if (c_only && !in_c_[p]) continue;
      if (colour_[p] != kUncoloured) ++counts[static_cast<std::size_t>(colour_[p])];
    }
    return counts;
  }

  std::vector<int> unused_colours(const std::vector<long long>& counts) const {
    std::vector<int> out;
    for (int i = 1; i <= d_; ++i) {
      if (counts[static_cast<std::size_t>(i)] == 0) out.push_back(i);
    }
    return out;
  }

  void require_distinct(const std::vector<int>& sorted_colours, const char* where) const {
    if (std::adjacent_find(sorted_colours.begin(), sorted_colours.end()) != sorted_colours.end()) {
      breach(std::string("repeated C-colour inside a light cut (") + where + ")");
    }
  }

  /// Blank U-members of the cut take palette entries left to right.
  void paint_u(Cut cut, const std::vector<int>& palette) {
    std::size_t next = 0;
    for (std::size_t p = cut.lo; p < cut.hi; ++p) {
      if (in_c_[p] || colour_[p] != kUncoloured) continue;
      if (next >= palette.size()) breach("palette exhausted");
      colour_[p] = palette[next++];
    }
    painted_ = painted_ || next > 0;
  }

  /// Cyclic colouring of every member of a C-free cut.
  void paint_modulo(Cut cut, const std::vector<int>& order) {
    std::size_t l = 0;
    for (std::size_t p = cut.lo; p < cut.hi; ++p, ++l) {
      if (in_c_[p]) breach("modulo-d colouring over a cut that holds C");
      colour_[p] = order[l % order.size()];
    }
    painted_ = painted_ || cut.size() > 0;
  }

  template <typename Visit>
  void for_each_node(int level, Visit&& visit) {
    const int shift = j_ - level;
    std::size_t p = 0;
    while (p < idx_.size()) {
      const std::uint64_t node = idx_[p] >> shift;
      std::size_t q = p;
      while (q < idx_.size() && (idx_[q] >> shift) == node) ++q;
      visit(DyadicInterval{level, node}, Cut{p, q});
      p = q;
    }
  }

  void trace(DyadicInterval node, CaseLabel label, bool mirrored) {
    if (options_.on_case) options_.on_case(CaseTrace{node, label, mirrored});
  }

  // --- stage s0 ----------------------------------------------------------

  void start(DyadicInterval K, Cut cut) {
    const auto h = static_cast<long long>(cut.size());
    const long long c = c_count(cut);
    if (h < d_ || c == 0) {
      trace(K, CaseLabel::start_blank, false);
      return;
    }
    if (h != d_) breach("start-level cut larger than d at " + to_string(K));
    auto cs = c_colours(cut);
    require_distinct(cs, "I.2");
    paint_u(cut, unused_colours(colour_counts(cut, true)));
    trace(K, CaseLabel::start_complete, false);
  }

  // --- inductive step ----------------------------------------------------

  void step(DyadicInterval L, Cut cut) {
    const auto [left_node, right_node] = children(L);
    const Cut left = cut_of(left_node);
    const Cut right = cut_of(right_node);
    const ChildCounts counts{c_count(left), c_count(right), static_cast<long long>(left.size()),
                             static_cast<long long>(right.size())};
    const CaseDispatch dc = dispatch_case(counts, d_);
    const Cut first = dc.mirrored ? right : left;
    const Cut second = dc.mirrored ? left : right;

    painted_ = false;
    switch (dc.label) {
      case CaseLabel::blank:
      case CaseLabel::both_heavy:
        break;
      case CaseLabel::both_light:
        both_light(left, right);
        break;
      case CaseLabel::left_light:
        light_beside_heavy(left, right);
        break;
      case CaseLabel::right_light:
        light_beside_heavy(right, left);
        break;
      case CaseLabel::seeded_both_heavy:
        paint_modulo(first, iota_colours(1, d_));
        break;
      case CaseLabel::seeded_both_light:
        both_light(first, second);
        break;
      case CaseLabel::seeded_empty_light:
        light_beside_heavy(first, second);
        break;
      case CaseLabel::seeded_empty_heavy:
        empty_heavy_beside_light(first, second);
        break;
      case CaseLabel::start_blank:
      case CaseLabel::start_complete:
        breach("start label in inductive step");
    }
    trace(L, dc.label, dc.mirrored);
    if (options_.self_check) verify_node(L, cut, counts);
  }

  // Both children light: colours inside each child stay distinct and every
  // colour ends up with one or two members in L. The procedure runs on a
  // canonical relabelling (C n first -> 1..m, ...) and is mapped back.
  void both_light(Cut first, Cut second) {
    const auto m = static_cast<int>(c_count(first));
    const auto n = static_cast<int>(c_count(second));
    const auto x = static_cast<int>(u_count(first));
    const std::vector<int> cl = c_colours(first);
    const std::vector<int> cr = c_colours(second);
    require_distinct(cl, "II.2.A.2 first");
    require_distinct(cr, "II.2.A.2 second");

    std::vector<int> in_both;
    std::vector<int> only_first;
    std::vector<int> only_second;
    std::set_intersection(cl.begin(), cl.end(), cr.begin(), cr.end(), std::back_inserter(in_both));
    std::set_difference(cl.begin(), cl.end(), cr.begin(), cr.end(), std::back_inserter(only_first));
    std::set_difference(cr.begin(), cr.end(), cl.begin(), cl.end(), std::back_inserter(only_second));

    // actual[k] is the real colour standing for canonical colour k.
    std::vector<int> actual{0};
    std::vector<int> palette_first;
    std::vector<int> palette_second;
    if (m + n < d_) {
      if (!in_both.empty()) breach("C n L repeats a colour while |C n L| < d");
      append(actual, cl);
      append(actual, cr);
      std::vector<char> taken(static_cast<std::size_t>(d_) + 1, 0);
      for (int c : cl) taken[static_cast<std::size_t>(c)] = 1;
      for (int c : cr) taken[static_cast<std::size_t>(c)] = 1;
      for (int c = 1; c <= d_; ++c) {
        if (!taken[static_cast<std::size_t>(c)]) actual.push_back(c);
      }
      palette_first = iota_colours(m + n + 1, d_);
      append(palette_first, iota_colours(m + 1, m + n));
      if (m + n + x < d_) {
        palette_second = iota_colours(m + n + x + 1, d_);
        append(palette_second, iota_colours(1, m));
        append(palette_second, iota_colours(m + n + 1, m + n + x));
      } else {
        // Any y of these work; colours absent from C n L come first.
        palette_second = iota_colours(m + n + 1, d_);
        append(palette_second, iota_colours(1, m));
      }
    } else {
      if (static_cast<int>(only_second.size()) != d_ - m ||
          static_cast<int>(in_both.size()) != m + n - d_) {
        breach("C n L does not use every colour although |C n L| >= d");
      }
      append(actual, in_both);
      append(actual, only_first);
      append(actual, only_second);
      palette_first = iota_colours(m + 1, d_);
      palette_second = iota_colours(m + n - d_ + 1, m);
    }
    auto to_actual = [&](std::vector<int> canonical) {
      for (int& c : canonical) c = actual[static_cast<std::size_t>(c)];
      return canonical;
    };
    paint_u(first, to_actual(palette_first));
    paint_u(second, to_actual(palette_second));
  }

  // |H n light| < d <= |H n heavy|. Previsibility keeps U out of the heavy
  // child, so only U n light needs colours: the colours absent from
  // C n light, least represented in C n heavy first.
  void light_beside_heavy(Cut light, Cut heavy) {
    if (u_count(heavy) != 0) breach("U meets a heavy child next to a light one");
    if (u_count(light) == 0) return;
    const std::vector<int> in_light = c_colours(light);
    require_distinct(in_light, "II.2.A.3");
    const auto heavy_counts = colour_counts(heavy, true);
    std::vector<int> absent;
    for (int t = 1; t <= d_; ++t) {
      if (!std::binary_search(in_light.begin(), in_light.end(), t)) absent.push_back(t);
    }
    std::stable_sort(absent.begin(), absent.end(), [&](int a, int b) {
      return heavy_counts[static_cast<std::size_t>(a)] < heavy_counts[static_cast<std::size_t>(b)];
    });
    paint_u(light, absent);
  }

  // C n empty_heavy is empty and |H n light| < d: distinct fresh colours in
  // the light child, then a cyclic colouring of the heavy one that starts
  // with the colours the light child did not use.
  void empty_heavy_beside_light(Cut empty_heavy, Cut light) {
    const auto c_in_light = c_colours(light);
    require_distinct(c_in_light, "II.2.B.4");
    paint_u(light, unused_colours(colour_counts(light, true)));
    const auto h_counts = colour_counts(light);
    std::vector<int> order = unused_colours(h_counts);
    for (int c = 1; c <= d_; ++c) {
      if (h_counts[static_cast<std::size_t>(c)] != 0) order.push_back(c);
    }
    paint_modulo(empty_heavy, order);
  }

  // --- root ----------------------------------------------------------------

  void finish_root() {
    const Cut all{0, idx_.size()};
    if (!has_blank_u(all)) return;
    const auto h = static_cast<long long>(all.size());
    const long long c = c_count(all);
    if (h < d_) {
      auto cs = c_colours(all);
      require_distinct(cs, "II.1 root");
      paint_u(all, unused_colours(colour_counts(all, true)));
      trace({0, 0}, CaseLabel::blank, false);
    } else if (c == 0) {
      paint_modulo(all, iota_colours(1, d_));
      trace({0, 0}, CaseLabel::blank, false);
    } else {
      breach("root left blank although |H| >= d and C is nonempty");
    }
  }

  // --- self checks -----------------------------------------------------------

  Colouring cut_colouring(Cut cut) const {
    std::vector<std::uint64_t> idx(idx_.begin() + static_cast<std::ptrdiff_t>(cut.lo),
                                   idx_.begin() + static_cast<std::ptrdiff_t>(cut.hi));
    std::vector<int> col(colour_.begin() + static_cast<std::ptrdiff_t>(cut.lo),
                         colour_.begin() + static_cast<std::ptrdiff_t>(cut.hi));
    return Colouring(IntervalSet(j_, std::move(idx)), d_, std::move(col));
  }

  void verify_node(DyadicInterval L, Cut cut, const ChildCounts& counts) const {
    const long long h = counts.h_left + counts.h_right;
    const long long c = counts.c_left + counts.c_right;
    if (h < d_ || c == 0) return;  // blank nodes are checked by check_stage
    if (has_blank_u(cut)) breach("U n " + to_string(L) + " not fully coloured");
    if (painted_) {
      auto r = check_homogeneous_within(cut_colouring(cut), params_, L);
      if (!r) breach("subtree of " + to_string(L) + ": " + describe(*r.violation));
    } else {
      auto cc = colour_counts(cut);
      std::vector<long long> counts_only(cc.begin() + 1, cc.end());
      if (auto v = test_counts(L, counts_only, params_)) breach(describe(*v));
    }
  }

  void check_stage(int level) {
    if (!options_.self_check) return;
    for_each_node(level, [&](DyadicInterval K, Cut cut) {
      const auto h = static_cast<long long>(cut.size());
      const bool should_be_coloured = h >= d_ && c_count(cut) > 0;
      if (should_be_coloured) {
        if (has_blank_u(cut)) breach("stage invariant: U n " + to_string(K) + " not coloured");
        auto cc = colour_counts(cut);
        if (std::find(cc.begin() + 1, cc.end(), 0) != cc.end()) {
          breach("stage invariant: colour missing in " + to_string(K));
        }
      } else if (has_coloured_u(cut)) {
        breach("stage invariant: U n " + to_string(K) + " coloured too early");
      }
    });
  }

  int j_;
  int d_;
  const HomogeneityParams& params_;
  const ColourerOptions& options_;
  std::vector<std::uint64_t> idx_;
  std::vector<char> in_c_;
  std::vector<int> colour_;
  bool painted_ = false;
};

}  // namespace

Colouring extend_colouring(const Colouring& c_col, const IntervalSet& u,
                           const HomogeneityParams& params, const ColourerOptions& options) {
  if (c_col.level() != u.level()) {
    throw Error(ErrorCode::invalid_argument, "C and U live on different levels");
  }
  if (!c_col.base().disjoint(u)) {
    throw Error(ErrorCode::invalid_argument, "C and U must be disjoint");
  }
  if (c_col.d() != params.d()) {
    throw Error(ErrorCode::invalid_argument, "colouring d does not match parameters");
  }
  if (!c_col.total()) {
    throw Error(ErrorCode::precondition, "the colouring of C must be total");
  }
  if (auto r = check_homogeneous(c_col, params); !r) {
    throw Error(ErrorCode::precondition,
                "colouring of C is not homogeneous: " + describe(*r.violation), r.violation);
  }
  if (auto r = check_previsible(c_col.base(), u, params.d()); !r) {
    throw Error(ErrorCode::precondition,
                "(C, U) is not d-previsible: " + describe(*r.violation), r.violation);
  }
  if (u.empty()) return c_col;

  Extender ext(c_col, u, params, options);
  Colouring out = ext.run();

  if (!out.total()) throw Error(ErrorCode::internal, "colourer left U partially blank");
  for (std::size_t p = 0; p < c_col.base().size(); ++p) {
    if (out.colour_of(c_col.base()[p]) != c_col.colour_at(p)) {
      throw Error(ErrorCode::internal, "colourer changed a colour of C");
    }
  }
  if (auto r = check_homogeneous(out, params); !r) {
    throw Error(ErrorCode::internal,
                "colourer output is not homogeneous: " + describe(*r.violation), r.violation);
  }
  return out;
}

}  // namespace dyad
