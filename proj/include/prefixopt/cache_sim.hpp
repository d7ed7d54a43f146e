#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prefixopt/errors.hpp"
#include "prefixopt/objective.hpp"
#include "prefixopt/tokenizer.hpp"

namespace prefixopt {

enum class EvictionPolicy { none, lru };

inline EvictionPolicy eviction_by_name(std::string_view name) {
  if (name == "none") return EvictionPolicy::none;
  if (name == "lru") return EvictionPolicy::lru;
  throw schema_error("unknown eviction policy: " + std::string(name) +
                     " (expected 'none' or 'lru')");
}

inline std::string_view eviction_name(EvictionPolicy p) {
  return p == EvictionPolicy::none ? "none" : "lru";
}

struct CacheConfig {
  std::uint64_t capacity_tokens = 0;  // 0 = unbounded; ignored under eviction none
  EvictionPolicy eviction = EvictionPolicy::none;
  // Shorter matched prefixes earn no hit credit (provider billing threshold);
  // insertion still happens.
  std::uint64_t min_cacheable_prefix_tokens = 0;
};

struct RequestSim {
  std::uint64_t input_tokens = 0;
  std::uint64_t hit_tokens = 0;      // credited prefix hit (0 when below the minimum)
  std::uint64_t miss_tokens = 0;     // input - hit
  std::uint64_t written_tokens = 0;  // tokens newly inserted into the store
  bool uncacheable = false;          // single prompt larger than the whole cache
};

struct SimReport {
  std::vector<RequestSim> requests;
  std::uint64_t total_input = 0;
  std::uint64_t total_hit = 0;
  std::uint64_t total_miss = 0;
  std::uint64_t evicted_tokens = 0;
  double phr = 0.0;  // total_hit / total_input
};

namespace detail {

// Token-sequence prefix store with radix-tree semantics: one node per stored
// token, children looked up by token id. Eviction works on a recency list
// ordered oldest request first and, within one request, deepest token first —
// so trimming always peels the tail of the least-recently-matched branch and
// never orphans a subtree. Per-token trimming keeps hit counts monotone in
// capacity.
class TokenTrie {
 public:
  TokenTrie() { nodes_.push_back({}); }  // index 0 is the root sentinel

  std::uint64_t used() const { return used_; }
  std::uint64_t evicted() const { return evicted_; }

  // Longest stored prefix of `seq`; fills `path` with the matched node ids.
  std::size_t match(const std::vector<std::uint32_t>& seq, std::vector<std::int32_t>& path) {
    path.clear();
    std::int32_t cur = 0;
    for (std::uint32_t token : seq) {
      std::int32_t child = find_child(cur, token);
      if (child < 0) break;
      path.push_back(child);
      cur = child;
    }
    return path.size();
  }

  void touch(const std::vector<std::int32_t>& path, std::uint32_t tick) {
    for (std::int32_t n : path) {
      nodes_[n].tick = tick;
      lru_detach(n);
      lru_push_back(n);
    }
  }

  // Evict oldest branch tails until `extra` more tokens fit in `capacity`.
  // Nodes touched by the current request are never evicted.
  void evict_until_fits(std::uint64_t extra, std::uint64_t capacity, std::uint32_t tick) {
    while (used_ + extra > capacity && lru_head_ >= 0) {
      std::int32_t victim = lru_head_;
      if (nodes_[victim].tick == tick) break;
      lru_detach(victim);
      unlink_from_parent(victim);
      nodes_[victim].first_child = -1;
      free_.push_back(victim);
      --used_;
      ++evicted_;
    }
  }

  // Append the unmatched suffix below the last matched node.
  void insert(const std::vector<std::uint32_t>& seq, std::size_t from,
              std::vector<std::int32_t>& path, std::uint32_t tick) {
    std::int32_t cur = path.empty() ? 0 : path.back();
    for (std::size_t i = from; i < seq.size(); ++i) {
      std::int32_t node = alloc();
      nodes_[node].token = seq[i];
      nodes_[node].tick = tick;
      nodes_[node].parent = cur;
      nodes_[node].first_child = -1;
      nodes_[node].next_sibling = nodes_[cur].first_child;
      nodes_[cur].first_child = node;
      lru_push_back(node);
      ++used_;
      path.push_back(node);
      cur = node;
    }
  }

  // Rewrite the recency order of this request's full path: deepest token
  // first, so future trimming works tail-inward.
  void reorder_path(const std::vector<std::int32_t>& path) {
    for (std::size_t i = path.size(); i-- > 0;) {
      lru_detach(path[i]);
      lru_push_back(path[i]);
    }
  }

 private:
  struct Node {
    std::uint32_t token = 0;
    std::uint32_t tick = 0;
    std::int32_t parent = -1;
    std::int32_t first_child = -1;
    std::int32_t next_sibling = -1;
    std::int32_t lru_prev = -1;
    std::int32_t lru_next = -1;
  };

  std::vector<Node> nodes_;
  std::vector<std::int32_t> free_;
  std::int32_t lru_head_ = -1;
  std::int32_t lru_tail_ = -1;
  std::uint64_t used_ = 0;
  std::uint64_t evicted_ = 0;

  std::int32_t alloc() {
    if (!free_.empty()) {
      std::int32_t n = free_.back();
      free_.pop_back();
      nodes_[n] = {};
      return n;
    }
    nodes_.push_back({});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t find_child(std::int32_t parent, std::uint32_t token) const {
    for (std::int32_t c = nodes_[parent].first_child; c >= 0; c = nodes_[c].next_sibling)
      if (nodes_[c].token == token) return c;
    return -1;
  }

  void unlink_from_parent(std::int32_t node) {
    std::int32_t parent = nodes_[node].parent;
    std::int32_t c = nodes_[parent].first_child;
    if (c == node) {
      nodes_[parent].first_child = nodes_[node].next_sibling;
      return;
    }
    while (c >= 0 && nodes_[c].next_sibling != node) c = nodes_[c].next_sibling;
    if (c >= 0) nodes_[c].next_sibling = nodes_[node].next_sibling;
  }

  void lru_detach(std::int32_t node) {
    Node& n = nodes_[node];
    if (n.lru_prev >= 0)
      nodes_[n.lru_prev].lru_next = n.lru_next;
    else if (lru_head_ == node)
      lru_head_ = n.lru_next;
    if (n.lru_next >= 0)
      nodes_[n.lru_next].lru_prev = n.lru_prev;
    else if (lru_tail_ == node)
      lru_tail_ = n.lru_prev;
    n.lru_prev = n.lru_next = -1;
  }

  void lru_push_back(std::int32_t node) {
    Node& n = nodes_[node];
    n.lru_prev = lru_tail_;
    n.lru_next = -1;
    if (lru_tail_ >= 0)
      nodes_[lru_tail_].lru_next = node;
    else
      lru_head_ = node;
    lru_tail_ = node;
  }
};

struct TransparentHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

struct TransparentEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};

}  // namespace detail

// Replay prompts in order through the prefix store. For each prompt the hit
// is the longest stored prefix of its token sequence (credited only from
// min_cacheable_prefix_tokens up), then the full sequence is inserted. Under
// lru with finite capacity, least-recently-matched branch tails are evicted
// to make room. Strictly sequential; the order is the experiment.
inline SimReport simulate(const std::vector<std::string>& prompts, const CacheConfig& cfg,
                          const Tokenizer& tok) {
  if (prompts.empty()) throw domain_error("simulate: prompt list is empty");
  if (cfg.eviction == EvictionPolicy::lru && cfg.capacity_tokens == 0)
    throw schema_error("simulate: lru eviction needs a finite capacity "
                       "(capacity 0 means unbounded, use eviction none)");

  const bool bounded = cfg.eviction == EvictionPolicy::lru;
  detail::TokenTrie trie;
  std::unordered_map<std::string, std::uint32_t, detail::TransparentHash, detail::TransparentEq>
      token_ids;
  std::vector<std::uint32_t> seq;
  std::vector<std::int32_t> path;

  SimReport report;
  report.requests.reserve(prompts.size());

  for (std::size_t i = 0; i < prompts.size(); ++i) {
    const std::uint32_t tick = static_cast<std::uint32_t>(i + 1);
    seq.clear();
    for (std::string_view piece : tok.tokens(prompts[i])) {
      auto it = token_ids.find(piece);
      if (it == token_ids.end())
        it = token_ids.emplace(std::string(piece), static_cast<std::uint32_t>(token_ids.size()))
                 .first;
      seq.push_back(it->second);
    }

    RequestSim req;
    req.input_tokens = seq.size();

    if (bounded && req.input_tokens > cfg.capacity_tokens) {
      req.uncacheable = true;
      req.miss_tokens = req.input_tokens;
      report.requests.push_back(req);
      continue;
    }

    std::size_t raw_hit = trie.match(seq, path);
    trie.touch(path, tick);
    if (bounded) trie.evict_until_fits(seq.size() - raw_hit, cfg.capacity_tokens, tick);
    trie.insert(seq, raw_hit, path, tick);
    trie.reorder_path(path);

    req.hit_tokens = raw_hit >= cfg.min_cacheable_prefix_tokens
                         ? static_cast<std::uint64_t>(raw_hit)
                         : 0;
    req.miss_tokens = req.input_tokens - req.hit_tokens;
    req.written_tokens = req.input_tokens - raw_hit;
    report.requests.push_back(req);
  }

  for (const RequestSim& r : report.requests) {
    report.total_input += r.input_tokens;
    report.total_hit += r.hit_tokens;
    report.total_miss += r.miss_tokens;
  }
  report.evicted_tokens = trie.evicted();
  report.phr = report.total_input
                   ? static_cast<double>(report.total_hit) / report.total_input
                   : 0.0;
  return report;
}

// Render every schedule entry (shared system prompt and question first) and
// replay the prompts. Under an unbounded cache the instruction prefix hits
// from the second request on.
inline SimReport phr_for_schedule(const RequestSchedule& schedule, const Table& t,
                                  std::string_view system_prompt, std::string_view question,
                                  const CacheConfig& cfg, const Tokenizer& tok) {
  validate_schedule(schedule, t);
  std::vector<std::string> prompts;
  prompts.reserve(schedule.size());
  for (const auto& e : schedule.entries)
    prompts.push_back(render_prompt(e, t, system_prompt, question));
  return simulate(prompts, cfg, tok);
}

}  // namespace prefixopt
