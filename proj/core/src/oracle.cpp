#include "dyad/oracle.hpp"

#include <algorithm>

#include "dyad/criteria.hpp"

namespace dyad {

namespace {

// One testing interval with a nonempty cut.
struct Node {
  DyadicInterval interval;
  int total = 0;      // members inside
  int remaining = 0;  // members still blank
  std::vector<int> counts;
};

class Search {
 public:
  Search(const Colouring& base, const HomogeneityParams& params, const OracleOptions& options)
      : base_(base), params_(params), options_(options), d_(params.d()),
        colours_(base.colours().begin(), base.colours().end()) {
    const int j = base.level();
    const auto& members = base.base();
    ancestors_.resize(members.size());
    // Build nodes level by level from the root down so that ancestors_[p]
    // lists the chain root-first.
    for (int level = 0; level <= j; ++level) {
      std::size_t p = 0;
      while (p < members.size()) {
        const DyadicInterval node = ancestor_at(members[p], level);
        const auto [lo, hi] = members.range_within(node);
        Node n;
        n.interval = node;
        n.total = static_cast<int>(hi - lo);
        n.counts.assign(static_cast<std::size_t>(d_) + 1, 0);
        for (std::size_t q = lo; q < hi; ++q) {
          ancestors_[q].push_back(nodes_.size());
          if (colours_[q] == kUncoloured) {
            ++n.remaining;
          } else {
            ++n.counts[static_cast<std::size_t>(colours_[q])];
          }
        }
        nodes_.push_back(std::move(n));
        p = hi;
      }
    }
    for (std::size_t q = 0; q < members.size(); ++q) {
      if (colours_[q] == kUncoloured) blanks_.push_back(q);
    }
  }

  ExtensionReport run() {
    for (const Node& n : nodes_) {
      if (!feasible(n)) {
        if (options_.canonical) report_.canonical_count = 0;
        return std::move(report_);
      }
    }
    dfs(0, 0);
    if (options_.canonical) {
      canonical_mode_ = true;
      canonical_count_ = 0;
      dfs(0, 0);
      report_.canonical_count = canonical_count_;
    }
    return std::move(report_);
  }

 private:
  bool feasible(const Node& n) const {
    auto first = n.counts.begin() + 1;
    const long long mx = *std::max_element(first, n.counts.end());
    const long long mn = *std::min_element(first, n.counts.end());
    if (n.remaining == 0) {
      if (n.total > d_) return params_.balanced(mx, mn);
      return mx <= 1;
    }
    if (n.total <= d_) return mx <= 1;
    // The final minimum is at most mn + remaining and at most total / d.
    const long long bound = std::min<long long>(mn + n.remaining, n.total / d_);
    return params_.balanced(mx, bound);
  }

  void tick() {
    if (++report_.visited > options_.budget) {
      throw Error(ErrorCode::budget_exceeded,
                  "oracle search exceeded its budget of " + std::to_string(options_.budget) +
                      " nodes");
    }
  }

  bool done() const {
    return !canonical_mode_ && report_.count >= options_.limit;
  }

  void accept() {
    Colouring full(base_.base(), d_, colours_);
    if (!check_homogeneous(full, params_)) return;
    if (canonical_mode_) {
      ++canonical_count_;
      return;
    }
    ++report_.count;
    if (report_.witnesses.size() < options_.max_witnesses) report_.witnesses.push_back(std::move(full));
    if (report_.count >= options_.limit) report_.at_least = true;
  }

  // `used` is the largest colour used so far (restricted-growth bound in canonical mode).
  void dfs(std::size_t k, int used) {
    if (done()) return;
    tick();
    if (k == blanks_.size()) {
      accept();
      return;
    }
    const std::size_t p = blanks_[k];
    const int top = canonical_mode_ ? std::min(d_, used + 1) : d_;
    for (int c = 1; c <= top && !done(); ++c) {
      colours_[p] = c;
      bool ok = true;
      for (std::size_t n : ancestors_[p]) {
        Node& node = nodes_[n];
        ++node.counts[static_cast<std::size_t>(c)];
        --node.remaining;
      }
      for (std::size_t n : ancestors_[p]) {
        if (!feasible(nodes_[n])) {
          ok = false;
          break;
        }
      }
      if (ok) dfs(k + 1, std::max(used, c));
      for (std::size_t n : ancestors_[p]) {
        Node& node = nodes_[n];
        --node.counts[static_cast<std::size_t>(c)];
        ++node.remaining;
      }
    }
    colours_[p] = kUncoloured;
  }

  const Colouring& base_;
  const HomogeneityParams& params_;
  const OracleOptions& options_;
  int d_;
  std::vector<int> colours_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::size_t>> ancestors_;
  std::vector<std::size_t> blanks_;
  ExtensionReport report_;
  bool canonical_mode_ = false;
  std::uint64_t canonical_count_ = 0;
};

}  // namespace

ExtensionReport oracle_extensions(const Colouring& base, const HomogeneityParams& params,
                                  const OracleOptions& options) {
  if (base.d() != params.d()) {
    throw Error(ErrorCode::invalid_argument, "colouring d does not match parameters");
  }
  if (options.limit == 0) throw Error(ErrorCode::invalid_argument, "limit must be positive");
  if (options.canonical && base.coloured_count() != 0) {
    throw Error(ErrorCode::invalid_argument,
                "canonical counting needs an entirely uncoloured collection");
  }
  Search search(base, params, options);
  return search.run();
}

Colouring canonicalize(const Colouring& col) {
  if (!col.total()) throw Error(ErrorCode::invalid_argument, "canonicalize needs a total colouring");
  const int d = col.d();
  std::vector<int> relabel(static_cast<std::size_t>(d) + 1, 0);
  int next = 1;
  std::vector<int> out(col.colours().begin(), col.colours().end());
  for (int& c : out) {
    auto& r = relabel[static_cast<std::size_t>(c)];
    if (r == 0) r = next++;
    c = r;
  }
  return Colouring(col.base(), d, std::move(out));
}

}  // namespace dyad
