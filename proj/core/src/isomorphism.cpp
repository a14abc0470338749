// SPDX-License-Identifier: Apache-2.0
#include "gbd/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace gbd {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

// One WL round: new color = hash(old color, sorted multiset of neighbor
// colors).
std::vector<std::uint64_t> wl_colors(const Graph& graph, int rounds) {
  const int n = graph.n;
  const auto nbrs = graph.neighbor_lists();
  std::vector<std::uint64_t> colors(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    colors[static_cast<std::size_t>(v)] =
        mix64(static_cast<std::uint64_t>(nbrs[static_cast<std::size_t>(v)].size()) + 1);
  }
  std::vector<std::uint64_t> next(static_cast<std::size_t>(n));
  for (int r = 0; r < rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      std::vector<std::uint64_t> around;
      around.reserve(nbrs[static_cast<std::size_t>(v)].size());
      for (int w : nbrs[static_cast<std::size_t>(v)]) {
        around.push_back(colors[static_cast<std::size_t>(w)]);
      }
      std::sort(around.begin(), around.end());
      std::uint64_t h = hash_combine(0x8096A5u, colors[static_cast<std::size_t>(v)]);
      for (std::uint64_t c : around) h = hash_combine(h, c);
      next[static_cast<std::size_t>(v)] = h;
    }
    colors.swap(next);
  }
  return colors;
}

}  // namespace

std::uint64_t wl_hash(const Graph& graph, int rounds) {
  std::vector<std::uint64_t> colors = wl_colors(graph, rounds);
  std::sort(colors.begin(), colors.end());
  std::uint64_t h = mix64(static_cast<std::uint64_t>(graph.n));
  h = hash_combine(h, static_cast<std::uint64_t>(graph.edge_count()));
  for (std::uint64_t c : colors) h = hash_combine(h, c);
  return h;
}

namespace {

// VF2-style backtracking with color compatibility. Nodes of `a` are matched
// in a fixed order chosen by ascending color-class size, then degree.
class IsoSearch {
 public:
  IsoSearch(const Graph& a, const Graph& b)
      : a_(a), b_(b), n_(a.n),
        colors_a_(wl_colors(a, 3)), colors_b_(wl_colors(b, 3)),
        map_a_(static_cast<std::size_t>(a.n), -1),
        map_b_(static_cast<std::size_t>(a.n), -1) {}

  bool run() {
    // Color multisets must agree.
    std::vector<std::uint64_t> ca = colors_a_;
    std::vector<std::uint64_t> cb = colors_b_;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;

    std::map<std::uint64_t, int> class_size;
    for (std::uint64_t c : ca) ++class_size[c];
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int u, int v) {
      const int su = class_size[colors_a_[static_cast<std::size_t>(u)]];
      const int sv = class_size[colors_a_[static_cast<std::size_t>(v)]];
      if (su != sv) return su < sv;
      const double du = a_.adjacency.row(u).sum();
      const double dv = a_.adjacency.row(v).sum();
      if (du != dv) return du > dv;
      return u < v;
    });
    return extend(0);
  }

 private:
  bool feasible(int u, int v) const {
    if (colors_a_[static_cast<std::size_t>(u)] != colors_b_[static_cast<std::size_t>(v)]) {
      return false;
    }
    for (int i = 0; i < n_; ++i) {
      const int w = map_a_[static_cast<std::size_t>(i)] >= 0 ? i : -1;
      if (w < 0) continue;
      if (a_.adjacency(u, w) != b_.adjacency(v, map_a_[static_cast<std::size_t>(w)])) {
        return false;
      }
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int u = order_[depth];
    // Budget guard: bail out conservatively on adversarial instances.
    if (++expansions_ > 50'000'000) return false;
    for (int v = 0; v < n_; ++v) {
      if (map_b_[static_cast<std::size_t>(v)] >= 0) continue;
      if (!feasible(u, v)) continue;
      map_a_[static_cast<std::size_t>(u)] = v;
      map_b_[static_cast<std::size_t>(v)] = u;
      if (extend(depth + 1)) return true;
      map_a_[static_cast<std::size_t>(u)] = -1;
      map_b_[static_cast<std::size_t>(v)] = -1;
    }
    return false;
  }

  const Graph& a_;
  const Graph& b_;
  int n_;
  std::vector<std::uint64_t> colors_a_;
  std::vector<std::uint64_t> colors_b_;
  std::vector<int> map_a_;
  std::vector<int> map_b_;
  std::vector<int> order_;
  long expansions_ = 0;
};

}  // namespace

bool is_isomorphic(const Graph& a, const Graph& b) {
  if (a.n != b.n || a.edge_count() != b.edge_count()) return false;
  IsoSearch search(a, b);
  return search.run();
}

UniqueNovelFlags uniqueness_novelty_flags(const std::vector<Graph>& generated,
                                          const std::vector<Graph>& training) {
  UniqueNovelFlags flags;
  flags.unique.assign(generated.size(), true);
  flags.novel.assign(generated.size(), true);

  std::vector<std::uint64_t> gen_hash(generated.size());
  for (std::size_t i = 0; i < generated.size(); ++i) gen_hash[i] = wl_hash(generated[i]);
  std::vector<std::uint64_t> train_hash(training.size());
  for (std::size_t i = 0; i < training.size(); ++i) train_hash[i] = wl_hash(training[i]);

  for (std::size_t i = 0; i < generated.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (gen_hash[i] == gen_hash[j] && is_isomorphic(generated[i], generated[j])) {
        flags.unique[i] = false;
        break;
      }
    }
    for (std::size_t j = 0; j < training.size(); ++j) {
      if (gen_hash[i] == train_hash[j] && is_isomorphic(generated[i], training[j])) {
        flags.novel[i] = false;
        break;
      }
    }
  }
  return flags;
}

std::pair<double, double> uniqueness_novelty(const std::vector<Graph>& generated,
                                             const std::vector<Graph>& training) {
  if (generated.empty()) return {0.0, 0.0};
  const UniqueNovelFlags flags = uniqueness_novelty_flags(generated, training);
  const double unique = std::count(flags.unique.begin(), flags.unique.end(), true);
  const double novel = std::count(flags.novel.begin(), flags.novel.end(), true);
  return {unique / static_cast<double>(generated.size()),
          novel / static_cast<double>(generated.size())};
}

}  // namespace gbd
