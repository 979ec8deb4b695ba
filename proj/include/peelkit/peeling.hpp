#pragma once

#include "peelkit/geometry.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>
#include <vector>

namespace peelkit {

inline constexpr int kMaxPeelPoints = 64;  // alive-set bitmask width

using PeelCount = BigInt;

struct PeelOptions {
  int max_exact_n = 24;  // memo is keyed by alive subsets, so memory grows with 2^n
  int threads = 1;
};

namespace detail {

inline uint64_t full_mask(int n) {
  return n >= 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
}

inline uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n) {
  // rejection sampling keeps the draw reproducible across standard libraries
  const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Convex hulls of alive-subsets of a fixed point list. One global lexicographic
// order is precomputed so per-subset hulls need no re-sorting.
class HullMachine {
 public:
  explicit HullMachine(const std::vector<Point>& pts) : pts_(&pts) {
    order_ = lex_sorted_unique(pts);
  }

  std::vector<std::size_t> hull_positions(uint64_t alive) const {
    std::vector<std::size_t> sub;
    sub.reserve(order_.size());
    for (std::size_t i : order_)
      if (alive >> i & 1) sub.push_back(i);
    return hull_of_lex_sorted(*pts_, sub);
  }

  // hull vertex positions sorted by ascending point id
  std::vector<std::size_t> hull_positions_by_id(uint64_t alive) const {
    auto h = hull_positions(alive);
    std::sort(h.begin(), h.end(), [&](std::size_t a, std::size_t b) {
      return (*pts_)[a].id < (*pts_)[b].id;
    });
    return h;
  }

 private:
  const std::vector<Point>* pts_;
  std::vector<std::size_t> order_;
};

class CountEngine {
 public:
  CountEngine(const std::vector<Point>& pts, int threads)
      : pts_(pts), hm_(pts), threads_(threads) {}

  BigInt run() {
    const uint64_t full = full_mask(static_cast<int>(pts_.size()));
    if (threads_ <= 1) return count(full);
    auto top = hm_.hull_positions_by_id(full);
    std::vector<BigInt> part(top.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= top.size()) break;
        part[i] = count(full & ~(uint64_t{1} << top[i]));
      }
    };
    const int nt = std::min<int>(threads_, static_cast<int>(top.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    BigInt total(0);
    for (const auto& x : part) total += x;
    return total;
  }

 private:
  struct Shard {
    std::mutex mu;
    std::unordered_map<uint64_t, BigInt> map;
  };

  BigInt count(uint64_t alive) {
    if (alive == 0) return BigInt(1);
    Shard& sh = shards_[shard_index(alive)];
    {
      std::lock_guard<std::mutex> lk(sh.mu);
      auto it = sh.map.find(alive);
      if (it != sh.map.end()) return it->second;
    }
    BigInt total(0);
    for (std::size_t pos : hm_.hull_positions(alive))
      total += count(alive & ~(uint64_t{1} << pos));
    {
      // duplicate inserts from racing workers carry identical values
      std::lock_guard<std::mutex> lk(sh.mu);
      sh.map.emplace(alive, total);
    }
    return total;
  }

  static std::size_t shard_index(uint64_t key) {
    return static_cast<std::size_t>((key * 0x9e3779b97f4a7c15ull) >> 58);
  }

  const std::vector<Point>& pts_;
  HullMachine hm_;
  int threads_;
  std::array<Shard, 64> shards_;
};

inline void check_countable(const PointSet& s) {
  if (s.empty()) throw std::invalid_argument("empty set");
  if (s.size() > kMaxPeelPoints) throw std::invalid_argument("use estimate");
  if (!s.ids_distinct()) throw std::invalid_argument("duplicate ids");
  if (!is_general_position(s)) throw std::invalid_argument("not in general position");
}

}  // namespace detail

// Exact number of peeling sequences. Throws "use estimate" past the exact-size
// limit and rejects degenerate inputs.
inline PeelCount count_peelings(const PointSet& s, const PeelOptions& opt = {}) {
  const int cap = std::min(opt.max_exact_n, kMaxPeelPoints);
  if (s.size() > cap) throw std::invalid_argument("use estimate");
  detail::check_countable(s);
  detail::CountEngine engine(s.points, std::max(1, opt.threads));
  return engine.run();
}

// Visits peeling sequences in lexicographic order of ids; the visitor returns
// false to stop early.
inline void for_each_peeling(const PointSet& s,
                             const std::function<bool(const std::vector<int>&)>& visit) {
  detail::check_countable(s);
  detail::HullMachine hm(s.points);
  std::vector<int> seq;
  seq.reserve(s.points.size());
  std::function<bool(uint64_t)> go = [&](uint64_t alive) -> bool {
    if (alive == 0) return visit(seq);
    for (std::size_t pos : hm.hull_positions_by_id(alive)) {
      seq.push_back(s.points[pos].id);
      bool keep_going = go(alive & ~(uint64_t{1} << pos));
      seq.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  go(detail::full_mask(s.size()));
}

inline std::vector<std::vector<int>> enumerate_peelings(const PointSet& s, uint64_t limit) {
  std::vector<std::vector<int>> out;
  if (limit == 0) return out;
  for_each_peeling(s, [&](const std::vector<int>& q) {
    out.push_back(q);
    return out.size() < limit;
  });
  return out;
}

// seq must be a permutation of the ids of s (anything else is an error, not a
// "false"); returns whether it is a valid peeling order.
inline bool is_peeling_sequence(const PointSet& s, const std::vector<int>& seq) {
  if (s.empty()) throw std::invalid_argument("empty set");
  if (s.size() > kMaxPeelPoints) throw std::invalid_argument("set too large");
  auto want = s.ids();
  std::sort(want.begin(), want.end());
  auto got = seq;
  std::sort(got.begin(), got.end());
  if (want != got || !s.ids_distinct()) throw std::invalid_argument("invalid sequence");

  std::unordered_map<int, std::size_t> pos_of;
  for (std::size_t i = 0; i < s.points.size(); ++i) pos_of[s.points[i].id] = i;
  detail::HullMachine hm(s.points);
  uint64_t alive = detail::full_mask(s.size());
  for (int id : seq) {
    auto hull = hm.hull_positions(alive);
    std::size_t p = pos_of[id];
    bool on_hull = false;
    for (std::size_t h : hull) on_hull |= (h == p);
    if (!on_hull) return false;
    alive &= ~(uint64_t{1} << p);
  }
  return true;
}

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

// Unbiased product estimator: one sample peels uniformly at random and
// multiplies the hull sizes it saw. The sample mean estimates the number of
// peeling sequences.
inline Estimate estimate_peelings(const PointSet& s, uint64_t samples, uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  detail::check_countable(s);
  detail::HullMachine hm(s.points);
  std::unordered_map<uint64_t, std::vector<std::size_t>> hull_cache;
  std::mt19937_64 rng(seed);
  double mean = 0, m2 = 0;
  for (uint64_t t = 0; t < samples; ++t) {
    uint64_t alive = detail::full_mask(s.size());
    double prod = 1;
    while (alive != 0) {
      auto it = hull_cache.find(alive);
      if (it == hull_cache.end())
        it = hull_cache.emplace(alive, hm.hull_positions_by_id(alive)).first;
      const auto& hull = it->second;
      prod *= static_cast<double>(hull.size());
      std::size_t pick = detail::bounded_draw(rng, hull.size());
      alive &= ~(uint64_t{1} << hull[pick]);
    }
    double delta = prod - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (prod - mean);
  }
  Estimate e;
  e.mean = mean;
  e.std_error =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1)) /
                        std::sqrt(static_cast<double>(samples))
                  : 0.0;
  return e;
}

inline PeelCount min_g_over(const std::vector<PointSet>& sets, const PeelOptions& opt = {}) {
  if (sets.empty()) throw std::invalid_argument("empty list");
  BigInt best;
  bool first = true;
  for (const auto& s : sets) {
    BigInt c = count_peelings(s, opt);
    if (first || c < best) {
      best = c;
      first = false;
    }
  }
  return best;
}

}  // namespace peelkit
