#include "pattree/rect_tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pattree/errors.hpp"

namespace pattree {

Rectangle full_rectangle(int d, int n) { return Rectangle(static_cast<size_t>(d), Interval{1, n}); }

bool is_empty(std::span<const Interval> r) {
  return std::any_of(r.begin(), r.end(), [](const Interval& s) { return s.empty(); });
}

namespace {
// Ranges at or below this size are answered by scanning.
constexpr size_t kBucket = 24;
}  // namespace

// A "level" indexes a subset of points on axis `axis` (points sorted by that
// coordinate). Inner axes carry a segment tree over the sorted order whose
// nodes own a level for axis+1; the last axis carries prefix sums.
template <typename W>
struct BasicRectangleTree<W>::Impl {
  int d = 0;
  std::vector<int> coords;  // point p occupies coords[p*d .. p*d+d)
  std::vector<W> weights;

  struct Level {
    int axis = 0;
    std::vector<int> keys;           // sorted coordinate on `axis`
    std::vector<std::uint32_t> ids;  // points in key order (inner axes only)
    std::vector<W> prefix;           // last axis only, size m+1
    int seg_root = -1;               // inner axes with m > kBucket
  };
  struct Seg {
    int lo = 0, hi = 0;  // [lo, hi) in the parent level's order
    int level = -1;      // level over those points for axis+1
    int left = -1, right = -1;
  };
  std::vector<Level> levels;
  std::vector<Seg> segs;
  int root = -1;

  [[nodiscard]] int coord(std::uint32_t p, int axis) const { return coords[static_cast<size_t>(p) * d + axis]; }

  // `ids` must already be sorted by coordinate `axis`.
  int build_level(int axis, std::vector<std::uint32_t> ids) {
    const int index = static_cast<int>(levels.size());
    levels.emplace_back();
    {
      Level& lv = levels.back();
      lv.axis = axis;
      lv.keys.reserve(ids.size());
      for (auto p : ids) lv.keys.push_back(coord(p, axis));
    }
    if (axis == d - 1) {
      std::vector<W> prefix(ids.size() + 1, W{});
      for (size_t i = 0; i < ids.size(); ++i) prefix[i + 1] = prefix[i] + weights[ids[i]];
      levels[static_cast<size_t>(index)].prefix = std::move(prefix);
      return index;
    }
    const size_t m = ids.size();
    levels[static_cast<size_t>(index)].ids = std::move(ids);
    if (m > kBucket) {
      std::vector<std::uint32_t> unused;
      const int seg = build_seg(index, 0, static_cast<int>(m), unused);
      levels[static_cast<size_t>(index)].seg_root = seg;
    }
    return index;
  }

  // Builds the node for [lo, hi) of a level and returns, through `sorted`, its
  // points ordered by the next axis. Inner nodes merge their children's
  // orders, so every point is sorted once per level rather than per node.
  int build_seg(int level_index, int lo, int hi, std::vector<std::uint32_t>& sorted) {
    const int index = static_cast<int>(segs.size());
    segs.push_back(Seg{lo, hi, -1, -1, -1});
    const int next = levels[static_cast<size_t>(level_index)].axis + 1;
    const auto by_next = [&](std::uint32_t a, std::uint32_t b) { return coord(a, next) < coord(b, next); };
    if (hi - lo > static_cast<int>(kBucket)) {
      const int mid = lo + (hi - lo) / 2;
      std::vector<std::uint32_t> left_sorted;
      std::vector<std::uint32_t> right_sorted;
      const int l = build_seg(level_index, lo, mid, left_sorted);
      const int r = build_seg(level_index, mid, hi, right_sorted);
      segs[static_cast<size_t>(index)].left = l;
      segs[static_cast<size_t>(index)].right = r;
      sorted.resize(left_sorted.size() + right_sorted.size());
      std::merge(left_sorted.begin(), left_sorted.end(), right_sorted.begin(), right_sorted.end(), sorted.begin(),
                 by_next);
    } else {
      const auto& src = levels[static_cast<size_t>(level_index)].ids;
      sorted.assign(src.begin() + lo, src.begin() + hi);
      std::stable_sort(sorted.begin(), sorted.end(), by_next);
    }
    const int child_level = build_level(next, sorted);
    segs[static_cast<size_t>(index)].level = child_level;
    return index;
  }

  [[nodiscard]] bool inside_from(std::uint32_t p, int axis, std::span<const Interval> r) const {
    for (int a = axis; a < d; ++a) {
      if (!r[static_cast<size_t>(a)].contains(coord(p, a))) return false;
    }
    return true;
  }

  void scan(const Level& lv, int lo, int hi, std::span<const Interval> r, W& acc) const {
    for (int i = lo; i < hi; ++i) {
      const auto p = lv.ids[static_cast<size_t>(i)];
      if (inside_from(p, lv.axis + 1, r)) acc += weights[p];
    }
  }

  void query_level(int level_index, std::span<const Interval> r, W& acc) const {
    const Level& lv = levels[static_cast<size_t>(level_index)];
    const Interval& s = r[static_cast<size_t>(lv.axis)];
    const int lo = static_cast<int>(std::lower_bound(lv.keys.begin(), lv.keys.end(), s.lo) - lv.keys.begin());
    const int hi = static_cast<int>(std::upper_bound(lv.keys.begin(), lv.keys.end(), s.hi) - lv.keys.begin());
    if (lo >= hi) return;
    if (lv.axis == d - 1) {
      acc += lv.prefix[static_cast<size_t>(hi)];
      acc -= lv.prefix[static_cast<size_t>(lo)];
      return;
    }
    if (lv.seg_root < 0) {
      scan(lv, lo, hi, r, acc);
      return;
    }
    query_seg(lv, lv.seg_root, lo, hi, r, acc);
  }

  void query_seg(const Level& lv, int seg_index, int lo, int hi, std::span<const Interval> r, W& acc) const {
    const Seg& sg = segs[static_cast<size_t>(seg_index)];
    if (hi <= sg.lo || sg.hi <= lo) return;
    if (lo <= sg.lo && sg.hi <= hi) {
      query_level(sg.level, r, acc);
      return;
    }
    if (sg.left < 0) {
      scan(lv, std::max(lo, sg.lo), std::min(hi, sg.hi), r, acc);
      return;
    }
    query_seg(lv, sg.left, lo, hi, r, acc);
    query_seg(lv, sg.right, lo, hi, r, acc);
  }
};

template <typename W>
BasicRectangleTree<W>::BasicRectangleTree(int dimension, int domain) : d_(dimension), n_(domain) {
  if (dimension < 1) throw UsageError("rectangle tree dimension must be at least 1");
  if (domain < 1) throw UsageError("rectangle tree domain size must be at least 1");
}

template <typename W>
BasicRectangleTree<W>::~BasicRectangleTree() = default;
template <typename W>
BasicRectangleTree<W>::BasicRectangleTree(BasicRectangleTree&&) noexcept = default;
template <typename W>
BasicRectangleTree<W>& BasicRectangleTree<W>::operator=(BasicRectangleTree&&) noexcept = default;

template <typename W>
void BasicRectangleTree<W>::insert(std::span<const int> point, const W& weight) {
  if (frozen_) throw std::logic_error("rectangle tree: insert after freeze");
  if (static_cast<int>(point.size()) != d_) {
    throw DataError("rectangle tree: point has " + std::to_string(point.size()) + " coordinates, expected " +
                    std::to_string(d_));
  }
  for (size_t a = 0; a < point.size(); ++a) {
    if (point[a] < 1 || point[a] > n_) {
      throw DataError("rectangle tree: coordinate " + std::to_string(point[a]) + " on axis " + std::to_string(a + 1) +
                      " outside [1, " + std::to_string(n_) + "]");
    }
  }
  if (weight == W{}) return;
  pending_coords_.insert(pending_coords_.end(), point.begin(), point.end());
  pending_weights_.push_back(weight);
}

template <typename W>
void BasicRectangleTree<W>::freeze() {
  if (frozen_) return;
  impl_ = std::make_unique<Impl>();
  impl_->d = d_;
  const size_t count = pending_weights_.size();
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0U);
  const auto at = [&](std::uint32_t p) { return pending_coords_.begin() + static_cast<std::ptrdiff_t>(p) * d_; };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(at(a), at(a) + d_, at(b), at(b) + d_);
  });
  // Merge duplicates and drop cancelled weights.
  for (size_t i = 0; i < count;) {
    size_t j = i;
    W w{};
    while (j < count && std::equal(at(order[i]), at(order[i]) + d_, at(order[j]))) {
      w += pending_weights_[order[j]];
      ++j;
    }
    if (w != W{}) {
      impl_->coords.insert(impl_->coords.end(), at(order[i]), at(order[i]) + d_);
      impl_->weights.push_back(std::move(w));
    }
    i = j;
  }
  std::vector<int>().swap(pending_coords_);
  std::vector<W>().swap(pending_weights_);
  // Points are now in lexicographic order, hence sorted on axis 0.
  std::vector<std::uint32_t> ids(impl_->weights.size());
  std::iota(ids.begin(), ids.end(), 0U);
  impl_->root = impl_->build_level(0, std::move(ids));
  frozen_ = true;
}

template <typename W>
W BasicRectangleTree<W>::query(std::span<const Interval> r) const {
  if (!frozen_) throw std::logic_error("rectangle tree: query before freeze");
  if (static_cast<int>(r.size()) != d_) {
    throw DataError("rectangle tree: rectangle has " + std::to_string(r.size()) + " segments, expected " +
                    std::to_string(d_));
  }
  W acc{};
  if (impl_->weights.empty() || is_empty(r)) return acc;
  impl_->query_level(impl_->root, r, acc);
  return acc;
}

template <typename W>
W BasicRectangleTree<W>::total() const {
  if (!frozen_) throw std::logic_error("rectangle tree: query before freeze");
  W acc{};
  for (const auto& w : impl_->weights) acc += w;
  return acc;
}

template <typename W>
size_t BasicRectangleTree<W>::point_count() const noexcept { return impl_ ? impl_->weights.size() : pending_weights_.size(); }

template class BasicRectangleTree<Integer>;
template class BasicRectangleTree<std::int64_t>;

}  // namespace pattree
