#include "onedigit/solver.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"

namespace onedigit {

using detail::Frac64;

namespace {

constexpr unsigned kRankBits = 30;
constexpr std::uint64_t kRankMask = (std::uint64_t{1} << kRankBits) - 1;
constexpr std::size_t kMaxEntries = std::size_t{1} << kRankBits;

// Entry plus its rank_ and order_ slots.
constexpr std::size_t kEntryBytes = 24 + 8;
// flat_hash_map<Frac64, uint64_t> slot at a typical load factor, plus the
// (value, key) pair copied out after the merge.
constexpr std::size_t kCandidateBytes = 40 + 24;

constexpr std::size_t kLeftChunk = 64;
constexpr std::size_t kShardCount = 64;
constexpr std::size_t kFlushSize = 1024;
constexpr std::size_t kGuardInterval = 1 << 16;

// Canonical order key of a node: operator tag, then the canonical ranks of
// the two children. Leaves sort before every node and get key 0.
std::uint64_t pack_key(Op op, std::uint32_t left_rank, std::uint32_t right_rank) {
  return ((static_cast<std::uint64_t>(op) + 1) << (2 * kRankBits)) |
         (static_cast<std::uint64_t>(left_rank) << kRankBits) | right_rank;
}

std::uint64_t commutative_key(Op op, std::uint32_t a_rank, std::uint32_t b_rank) {
  return a_rank <= b_rank ? pack_key(op, a_rank, b_rank) : pack_key(op, b_rank, a_rank);
}

std::optional<Frac64> repdigit64(int digit, int repeat, const Caps& caps) {
  if (repeat > 38) return std::nullopt;
  detail::u128 value = 0;
  for (int i = 0; i < repeat; ++i) value = value * 10 + static_cast<unsigned>(digit);
  if (value > static_cast<detail::u128>(caps.max_abs_numerator)) return std::nullopt;
  return Frac64{static_cast<std::int64_t>(value), 1};
}

std::size_t physical_memory() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return std::size_t{4} << 30;
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page_size);
}

}  // namespace

namespace detail {

std::optional<Frac64> from_rational(const Rational& r) {
  const BigInt& n = r.numerator();
  const BigInt& d = r.denominator();
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (n > kMax || n < -BigInt(kMax) || d > kMax) return std::nullopt;
  return Frac64{n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
}

std::optional<Frac64> add_slow(const Frac64& a, const Frac64& b, const Caps& caps) {
  Rational sum = rat_add(to_rational(a), to_rational(b));
  if (!rat_within(sum, caps)) return std::nullopt;
  return from_rational(sum);
}

}  // namespace detail

void SearchConfig::validate() const {
  if (digit < 1 || digit > 9) throw std::invalid_argument("digit must be in 1..9");
  if (max_digits < 1) throw std::invalid_argument("max_digits must be >= 1");
  if (ops.empty()) throw std::invalid_argument("at least one operation is required");
  caps.validate();
}

std::size_t SearchConfig::effective_memory_limit() const {
  return memory_limit_bytes != 0 ? memory_limit_bytes : physical_memory() / 2;
}

unsigned SearchConfig::effective_threads() const {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

BudgetTooLarge::BudgetTooLarge(int level, std::size_t estimated_bytes, std::size_t limit_bytes)
    : std::runtime_error("level " + std::to_string(level) + " needs about " +
                         std::to_string(estimated_bytes >> 20) + " MiB, limit is " +
                         std::to_string(limit_bytes >> 20) +
                         " MiB; lower the digit budget or tighten the caps"),
      level_(level),
      estimated_(estimated_bytes),
      limit_(limit_bytes) {}

// ---------------------------------------------------------------------------
// LevelSet

bool LevelSet::partial() const { return owner_->level_partial_[static_cast<std::size_t>(k_)]; }

std::optional<std::size_t> LevelSet::index_of(const Frac64& v) const {
  const auto& entries = owner_->entries_;
  auto first = entries.begin() + static_cast<std::ptrdiff_t>(begin_);
  auto last = entries.begin() + static_cast<std::ptrdiff_t>(end_);
  auto it = std::lower_bound(first, last, v, [](const LevelSets::Entry& e, const Frac64& x) {
    return detail::numeric_less(e.value, x);
  });
  if (it == last || !(it->value == v)) return std::nullopt;
  return static_cast<std::size_t>(it - first);
}

std::optional<Expr> LevelSet::find(const Rational& value) const {
  auto v = detail::from_rational(value);
  if (!v) return std::nullopt;
  auto i = index_of(*v);
  if (!i) return std::nullopt;
  return expr(*i);
}

bool LevelSet::contains(const Rational& value) const {
  auto v = detail::from_rational(value);
  return v && index_of(*v).has_value();
}

Rational LevelSet::value(std::size_t i) const {
  return detail::to_rational(owner_->entries_.at(begin_ + i).value);
}

Expr LevelSet::expr(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("LevelSet::expr");
  return owner_->materialize(static_cast<std::uint32_t>(begin_ + i));
}

// ---------------------------------------------------------------------------
// Level construction

class LevelSets::Builder {
 public:
  Builder(const LevelSets& sets, int k, const std::vector<Frac64>* keep)
      : sets_(sets),
        cfg_(sets.cfg_),
        k_(k),
        threads_(cfg_.effective_threads()),
        limit_(cfg_.effective_memory_limit()),
        shards_(threads_ == 1 ? 1 : kShardCount) {
    if (keep != nullptr) {
      filtering_ = true;
      keep_.insert(keep->begin(), keep->end());
      keep_integers_ = std::all_of(keep->begin(), keep->end(), [](const Frac64& f) { return f.den == 1; });
      for (const Frac64& f : *keep) {
        keep_min_ = std::min(keep_min_, f.num);
        keep_max_ = std::max(keep_max_, f.num);
      }
    }
  }

  std::vector<std::pair<Frac64, std::uint64_t>> run() {
    if (auto leaf = repdigit64(cfg_.digit, k_, cfg_.caps)) {
      if (accepts(*leaf)) shards_[shard_of(*leaf)].best.emplace(*leaf, 0);
    }
    plan_tasks();

    if (threads_ == 1) {
      Sink sink(*this);
      for (const Task& t : tasks_) execute(t, sink);
      sink.flush_all();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads_);
      for (unsigned w = 0; w < threads_; ++w) {
        pool.emplace_back([this] {
          Sink sink(*this);
          for (;;) {
            if (aborted_.load(std::memory_order_relaxed)) return;
            const std::size_t t = next_task_.fetch_add(1, std::memory_order_relaxed);
            if (t >= tasks_.size()) break;
            execute(tasks_[t], sink);
          }
          sink.flush_all();
        });
      }
      for (auto& th : pool) th.join();
    }
    if (aborted_) throw BudgetTooLarge(k_, abort_bytes_, limit_);

    std::size_t total = 0;
    for (const auto& s : shards_) total += s.best.size();
    std::vector<std::pair<Frac64, std::uint64_t>> out;
    out.reserve(total);
    for (auto& s : shards_) {
      out.insert(out.end(), s.best.begin(), s.best.end());
      s.best = {};
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return detail::numeric_less(a.first, b.first); });
    return out;
  }

 private:
  struct Task {
    Op op;
    int i;
    std::size_t a_begin;
    std::size_t a_end;
  };

  struct Shard {
    std::mutex mu;
    absl::flat_hash_map<Frac64, std::uint64_t> best;
  };

  // Candidate sink for one worker. With a single thread it writes straight
  // into the only shard; otherwise it batches per shard and merges under
  // the shard lock. Keeping the minimum key is order-independent.
  class Sink {
   public:
    explicit Sink(Builder& b) : b_(b), buffers_(b.shards_.size()) {}

    void offer(const Frac64& v, std::uint64_t key) {
      if (!b_.accepts(v)) return;
      if (b_.shards_.size() == 1) {
        merge_one(b_.shards_[0].best, v, key);
        if (++since_guard_ == kGuardInterval) {
          since_guard_ = 0;
          b_.guard(b_.shards_[0].best.size());
        }
        return;
      }
      const std::size_t s = b_.shard_of(v);
      auto& buf = buffers_[s];
      buf.emplace_back(v, key);
      if (buf.size() >= kFlushSize) flush(s);
    }

    void flush_all() {
      if (b_.shards_.size() == 1) return;
      for (std::size_t s = 0; s < buffers_.size(); ++s) flush(s);
    }

   private:
    static void merge_one(absl::flat_hash_map<Frac64, std::uint64_t>& map, const Frac64& v,
                          std::uint64_t key) {
      auto [it, inserted] = map.try_emplace(v, key);
      if (!inserted && key < it->second) it->second = key;
    }

    void flush(std::size_t s) {
      auto& buf = buffers_[s];
      if (buf.empty()) return;
      Shard& shard = b_.shards_[s];
      std::size_t size = 0;
      {
        std::lock_guard lock(shard.mu);
        for (const auto& [v, key] : buf) merge_one(shard.best, v, key);
        size = shard.best.size();
      }
      buf.clear();
      // Shards fill evenly, so one shard's size extrapolates to the total.
      b_.guard(size * b_.shards_.size());
    }

    Builder& b_;
    std::vector<std::vector<std::pair<Frac64, std::uint64_t>>> buffers_;
    std::size_t since_guard_ = 0;
  };

  bool accepts(const Frac64& v) const {
    if (!filtering_) return true;
    if (keep_integers_ && (v.den != 1 || v.num < keep_min_ || v.num > keep_max_)) return false;
    return keep_.contains(v);
  }

  void guard(std::size_t candidates) {
    const std::size_t bytes = sets_.entries_.size() * kEntryBytes + candidates * kCandidateBytes;
    if (bytes > limit_ || sets_.entries_.size() + candidates >= kMaxEntries) {
      abort_bytes_.store(bytes);
      aborted_.store(true);
      if (threads_ == 1) throw BudgetTooLarge(k_, bytes, limit_);
    }
  }

  std::size_t shard_of(const Frac64& v) const {
    return shards_.size() == 1 ? 0 : absl::Hash<Frac64>{}(v) % shards_.size();
  }

  void plan_tasks() {
    for (int i = 1; i < k_; ++i) {
      const int j = k_ - i;
      const std::size_t a_begin = sets_.level_begin_[static_cast<std::size_t>(i)];
      const std::size_t a_end = sets_.level_begin_[static_cast<std::size_t>(i) + 1];
      for (Op op : kAllOps) {
        if (!cfg_.ops.contains(op)) continue;
        if (is_commutative(op) && i > j) continue;
        for (std::size_t a = a_begin; a < a_end; a += kLeftChunk) {
          tasks_.push_back(Task{op, i, a, std::min(a + kLeftChunk, a_end)});
        }
      }
    }
    // Exponent operands: integers within the exponent cap.
    exponents_.resize(static_cast<std::size_t>(k_));
    if (cfg_.ops.contains(Op::Pow)) {
      const std::int64_t lo = cfg_.allow_negative_exponents ? -cfg_.caps.max_exponent_magnitude : 0;
      const std::int64_t hi = cfg_.caps.max_exponent_magnitude;
      for (int j = 1; j < k_; ++j) {
        const std::size_t b = sets_.level_begin_[static_cast<std::size_t>(j)];
        const std::size_t e = sets_.level_begin_[static_cast<std::size_t>(j) + 1];
        for (std::size_t id = b; id < e; ++id) {
          const Frac64& v = sets_.entries_[id].value;
          if (v.den == 1 && v.num >= lo && v.num <= hi) exponents_[static_cast<std::size_t>(j)].push_back(id);
        }
      }
    }
  }

  void execute(const Task& t, Sink& sink) {
    const auto& entries = sets_.entries_;
    const auto& rank = sets_.rank_;
    const Caps& caps = cfg_.caps;
    const int j = k_ - t.i;
    const std::size_t b_begin = sets_.level_begin_[static_cast<std::size_t>(j)];
    const std::size_t b_end = sets_.level_begin_[static_cast<std::size_t>(j) + 1];
    const bool same_level = t.i == j;

    for (std::size_t a = t.a_begin; a < t.a_end; ++a) {
      if (aborted_.load(std::memory_order_relaxed)) return;
      const Frac64 av = entries[a].value;
      const std::uint32_t ar = rank[a];
      switch (t.op) {
        case Op::Add:
          // Unordered pairs only: both operand orders canonicalize alike.
          for (std::size_t b = same_level ? a : b_begin; b < b_end; ++b) {
            if (auto v = detail::add(av, entries[b].value, caps)) {
              sink.offer(*v, commutative_key(Op::Add, ar, rank[b]));
            }
          }
          break;
        case Op::Mul:
          for (std::size_t b = same_level ? a : b_begin; b < b_end; ++b) {
            if (auto v = detail::mul(av, entries[b].value, caps)) {
              sink.offer(*v, commutative_key(Op::Mul, ar, rank[b]));
            }
          }
          break;
        case Op::Sub:
          for (std::size_t b = b_begin; b < b_end; ++b) {
            if (auto v = detail::sub(av, entries[b].value, caps)) {
              sink.offer(*v, pack_key(Op::Sub, ar, rank[b]));
            }
          }
          break;
        case Op::Div:
          for (std::size_t b = b_begin; b < b_end; ++b) {
            if (auto v = detail::div(av, entries[b].value, caps)) {
              sink.offer(*v, pack_key(Op::Div, ar, rank[b]));
            }
          }
          break;
        case Op::Pow:
          for (std::size_t b : exponents_[static_cast<std::size_t>(j)]) {
            if (auto v = detail::pow(av, entries[b].value, caps, cfg_.allow_negative_exponents)) {
              sink.offer(*v, pack_key(Op::Pow, ar, rank[b]));
            }
          }
          break;
      }
    }
  }

  const LevelSets& sets_;
  const SearchConfig& cfg_;
  const int k_;
  const unsigned threads_;
  const std::size_t limit_;

  bool filtering_ = false;
  bool keep_integers_ = false;
  std::int64_t keep_min_ = std::numeric_limits<std::int64_t>::max();
  std::int64_t keep_max_ = std::numeric_limits<std::int64_t>::min();
  absl::flat_hash_set<Frac64> keep_;

  std::vector<Shard> shards_;
  std::vector<Task> tasks_;
  std::vector<std::vector<std::size_t>> exponents_;
  std::atomic<std::size_t> next_task_{0};
  std::atomic<bool> aborted_{false};
  std::atomic<std::size_t> abort_bytes_{0};
};

// ---------------------------------------------------------------------------
// LevelSets

LevelSets::LevelSets(SearchConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  level_begin_ = {0, 0};  // S_0 is empty
  level_partial_ = {false};
}

LevelSet LevelSets::level(int k) const {
  if (k < 1 || k > levels()) throw std::out_of_range("level " + std::to_string(k) + " not built");
  const auto ku = static_cast<std::size_t>(k);
  return LevelSet(this, k, level_begin_[ku], level_begin_[ku + 1]);
}

void LevelSets::extend() { build_next(nullptr); }

void LevelSets::extend_partial(std::span<const Frac64> keep) {
  std::vector<Frac64> values(keep.begin(), keep.end());
  build_next(&values);
}

void LevelSets::build_next(const std::vector<Frac64>* keep) {
  if (levels() > 0 && level_partial_.back()) {
    throw std::logic_error("cannot extend past a partial level");
  }
  const int k = levels() + 1;

  if (keep == nullptr && k >= 3) {
    const double prev = static_cast<double>(level(k - 1).size());
    const double prev2 = std::max<double>(1.0, static_cast<double>(level(k - 2).size()));
    const double estimate = prev * std::max(1.0, prev / prev2);
    const double bytes = static_cast<double>(entries_.size()) * kEntryBytes + estimate * kCandidateBytes;
    const std::size_t limit = cfg_.effective_memory_limit();
    if (bytes > static_cast<double>(limit)) {
      throw BudgetTooLarge(k, static_cast<std::size_t>(bytes), limit);
    }
  }

  auto candidates = Builder(*this, k, keep).run();

  const std::size_t new_begin = entries_.size();
  entries_.reserve(new_begin + candidates.size());
  for (const auto& [value, key] : candidates) {
    Entry e;
    e.value = value;
    if (key == 0) {
      e.op = kLeaf;
      e.left = static_cast<std::uint32_t>(k);
    } else {
      e.op = static_cast<std::uint8_t>((key >> (2 * kRankBits)) - 1);
      e.left = order_[(key >> kRankBits) & kRankMask];
      e.right = order_[key & kRankMask];
    }
    entries_.push_back(e);
  }
  candidates = {};
  level_begin_.push_back(entries_.size());
  level_partial_.push_back(keep != nullptr);
  update_ranks(new_begin);
}

std::uint64_t LevelSets::order_key(std::uint32_t id) const {
  const Entry& e = entries_[id];
  if (e.op == kLeaf) return 0;
  return pack_key(static_cast<Op>(e.op), rank_[e.left], rank_[e.right]);
}

void LevelSets::update_ranks(std::size_t new_begin) {
  // Children of new entries are all older, so keys computed from the current
  // ranks order new nodes against old ones correctly; old entries keep their
  // relative order.
  std::vector<std::uint32_t> new_nodes;
  std::optional<std::uint32_t> new_leaf;
  for (std::size_t id = new_begin; id < entries_.size(); ++id) {
    if (entries_[id].op == kLeaf) {
      new_leaf = static_cast<std::uint32_t>(id);
    } else {
      new_nodes.push_back(static_cast<std::uint32_t>(id));
    }
  }
  std::vector<std::uint64_t> new_keys(entries_.size() - new_begin);
  for (std::uint32_t id : new_nodes) new_keys[id - new_begin] = order_key(id);
  std::sort(new_nodes.begin(), new_nodes.end(), [&](std::uint32_t a, std::uint32_t b) {
    return new_keys[a - new_begin] < new_keys[b - new_begin];
  });

  std::size_t old_leaves = 0;
  while (old_leaves < order_.size() && entries_[order_[old_leaves]].op == kLeaf) ++old_leaves;

  std::vector<std::uint32_t> merged;
  merged.reserve(entries_.size());
  merged.insert(merged.end(), order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(old_leaves));
  // A new leaf has the largest repeat seen so far.
  if (new_leaf) merged.push_back(*new_leaf);
  auto old_it = order_.begin() + static_cast<std::ptrdiff_t>(old_leaves);
  auto new_it = new_nodes.begin();
  while (old_it != order_.end() && new_it != new_nodes.end()) {
    if (order_key(*old_it) < new_keys[*new_it - new_begin]) {
      merged.push_back(*old_it++);
    } else {
      merged.push_back(*new_it++);
    }
  }
  merged.insert(merged.end(), old_it, order_.end());
  merged.insert(merged.end(), new_it, new_nodes.end());

  order_ = std::move(merged);
  rank_.resize(entries_.size());
  for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = static_cast<std::uint32_t>(r);
}

Expr LevelSets::materialize(std::uint32_t id) const {
  const Entry& e = entries_[id];
  if (e.op == kLeaf) return Expr::leaf(cfg_.digit, static_cast<int>(e.left));
  return Expr::node(static_cast<Op>(e.op), materialize(e.left), materialize(e.right));
}

// ---------------------------------------------------------------------------
// Queries

LevelSets build_level_sets(const SearchConfig& cfg) {
  LevelSets sets(cfg);
  for (int k = 1; k <= cfg.max_digits; ++k) sets.extend();
  return sets;
}

std::vector<SolveResult> solve_targets(std::span<const Rational> targets, const SearchConfig& cfg) {
  cfg.validate();
  std::vector<SolveResult> out(targets.size(), NotFoundWithinBudget{cfg.max_digits});

  // Distinct targets that can appear in a level set at all.
  absl::flat_hash_map<Frac64, std::vector<std::size_t>> wanted;
  std::vector<Frac64> pending;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!rat_within(targets[i], cfg.caps)) continue;
    auto v = detail::from_rational(targets[i]);
    auto [it, inserted] = wanted.try_emplace(*v);
    if (inserted) pending.push_back(*v);
    it->second.push_back(i);
  }
  std::sort(pending.begin(), pending.end(), detail::numeric_less);

  LevelSets sets(cfg);
  for (int k = 1; k <= cfg.max_digits && !pending.empty(); ++k) {
    if (k == cfg.max_digits) {
      sets.extend_partial(pending);
    } else {
      sets.extend();
    }
    const LevelSet level = sets.level(k);
    std::vector<Frac64> still;
    for (const Frac64& v : pending) {
      const Rational target = detail::to_rational(v);
      std::optional<Expr> found = level.find(target);
      if (!found) {
        still.push_back(v);
        continue;
      }
      const Expr& e = *found;
      EvalOutcome check = evaluate(e, cfg.caps, cfg.allow_negative_exponents);
      if (!check || check.value() != target || digit_count(e) != k) {
        throw std::logic_error("solver produced an unsound witness for " + target.str());
      }
      for (std::size_t i : wanted[v]) out[i] = Solution{cfg.digit, target, e, k};
    }
    pending = std::move(still);
  }
  return out;
}

SolveResult solve(const Rational& target, const SearchConfig& cfg) {
  return solve_targets(std::span<const Rational>(&target, 1), cfg).front();
}

std::vector<RangeRow> solve_range(std::int64_t lo, std::int64_t hi, const SearchConfig& cfg) {
  if (lo > hi) throw std::invalid_argument("solve_range: lo must not exceed hi");
  std::vector<Rational> targets;
  targets.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t t = lo; t <= hi; ++t) targets.emplace_back(t);
  auto results = solve_targets(targets, cfg);
  std::vector<RangeRow> rows;
  rows.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    rows.push_back(RangeRow{lo + static_cast<std::int64_t>(i), std::move(results[i])});
  }
  return rows;
}

}  // namespace onedigit
