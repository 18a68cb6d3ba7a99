#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccq/errors.hpp"
#include "ccq/ff.hpp"

namespace ccq {

/// Global node index, 0-based. Algorithms address nodes relative to the
/// currently active range.
using NodeId = std::size_t;
using Tag = std::uint32_t;

struct NodeRange {
  NodeId first = 0;
  std::size_t count = 0;

  [[nodiscard]] bool contains(NodeId g) const noexcept { return g >= first && g < first + count; }
  [[nodiscard]] NodeId end() const noexcept { return first + count; }
  friend bool operator==(const NodeRange&, const NodeRange&) = default;
};

struct Envelope {
  NodeId source;  // relative to the range active at delivery
  std::vector<Word> payload;
};

struct Message {
  NodeId source;       // global
  NodeId destination;  // global
  Tag tag;
  std::vector<Word> payload;
};

using RoutingRequest = std::vector<Message>;

class NodeStore {
 public:
  void put(const std::string& key, std::vector<Word> v) { slots_[key] = std::move(v); }
  [[nodiscard]] bool has(const std::string& key) const { return slots_.contains(key); }
  [[nodiscard]] const std::vector<Word>& get(const std::string& key) const;
  std::vector<Word>& mut(const std::string& key);
  void erase(const std::string& key) { slots_.erase(key); }
  void erase_prefix(const std::string& prefix);

  /// Messages delivered under `tag`, ordered by source; removes them.
  std::vector<Envelope> take(Tag tag);
  void deliver(Tag tag, Envelope e) { inbox_[tag].push_back(std::move(e)); }
  [[nodiscard]] bool inbox_empty() const noexcept { return inbox_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<Word>> slots_;
  std::map<Tag, std::vector<Envelope>> inbox_;
};

class CostLedger;

struct PhaseRecord {
  enum class Kind { local, route, parallel };
  std::string name;
  Kind kind = Kind::local;
  std::size_t subset_size = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::vector<CostLedger> branches;  // only for Kind::parallel

  friend bool operator==(const PhaseRecord&, const PhaseRecord&);
};

class CostLedger {
 public:
  void record(PhaseRecord r);
  [[nodiscard]] std::uint64_t total_rounds() const noexcept { return rounds_; }
  [[nodiscard]] std::uint64_t total_messages() const noexcept { return messages_; }
  [[nodiscard]] const std::vector<PhaseRecord>& phases() const noexcept { return phases_; }

  /// Sum of rounds over top-level phases whose name starts with prefix.
  [[nodiscard]] std::uint64_t rounds_with_prefix(std::string_view prefix) const;
  [[nodiscard]] std::uint64_t messages_with_prefix(std::string_view prefix) const;

  /// One record per line: phase, subset size, rounds, messages.
  [[nodiscard]] std::string to_text() const;
  /// Header "phase,rounds,messages"; routing and parallel phases only.
  [[nodiscard]] std::string to_csv() const;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;

 private:
  void append_text(std::string& out, int depth) const;

  std::vector<PhaseRecord> phases_;
  std::uint64_t rounds_ = 0;
  std::uint64_t messages_ = 0;
};

/// Rounds charged for one routing phase: 2 * ceil(load / n_active).
std::uint64_t routing_rounds(std::uint64_t load, std::size_t n_active);

/// Message units for one b-bit value when a message carries 2 ceil(log2 n) bits.
std::uint64_t payload_units(std::uint64_t bits, std::size_t n);

/// Per-node random stream keyed by (seed, phase, node).
std::mt19937_64 make_node_rng(std::uint64_t seed, std::string_view phase, NodeId node);
/// Unbiased draw from [0, bound).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

class CliqueWorld;

/// The view node-local code gets: its own store and nothing else.
class NodeContext {
 public:
  [[nodiscard]] NodeId id() const noexcept { return id_; }
  [[nodiscard]] NodeId rel() const noexcept { return id_ - range_.first; }
  [[nodiscard]] std::size_t n_active() const noexcept { return range_.count; }
  [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
  NodeStore& store() noexcept { return store_; }
  /// Stream keyed by the qualified phase name, so nested calls differ.
  [[nodiscard]] std::mt19937_64 rng(std::string_view phase) const {
    return make_node_rng(seed_, prefix_ + std::string(phase), id_);
  }

 private:
  friend class CliqueWorld;
  NodeContext(NodeId id, NodeRange r, const PrimeField& f, NodeStore& s, std::uint64_t seed, const std::string& prefix)
      : id_(id), range_(r), field_(f), store_(s), seed_(seed), prefix_(prefix) {}
  NodeId id_;
  NodeRange range_;
  const PrimeField& field_;
  NodeStore& store_;
  std::uint64_t seed_;
  const std::string& prefix_;
};

class Outbox {
 public:
  /// dst is relative to the active range.
  void send(NodeId dst, Tag tag, std::vector<Word> payload) {
    msgs_.push_back({src_, dst, tag, std::move(payload)});
  }

 private:
  friend class CliqueWorld;
  explicit Outbox(NodeId src_rel) : src_(src_rel) {}
  NodeId src_;
  std::vector<Message> msgs_;
};

class CliqueWorld {
 public:
  CliqueWorld(std::size_t n, PrimeField field, std::uint64_t seed);

  [[nodiscard]] std::size_t n() const noexcept { return stores_.size(); }
  [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const NodeRange& active() const noexcept { return ranges_.back(); }
  [[nodiscard]] const CostLedger& ledger() const noexcept { return ledger_; }
  void reset_ledger() { ledger_ = CostLedger{}; }

  /// Run node-local code on every node of the active range (in index order,
  /// or concurrently when parallel_local is set). Charges 0 rounds.
  void run_local(std::string_view phase, const std::function<void(NodeContext&)>& fn);

  /// Every active node produces messages from its own store; they are then
  /// routed and delivered. `units` is the message cost of one payload word.
  void exchange(std::string_view phase, const std::function<void(NodeContext&, Outbox&)>& producer,
                std::uint64_t units = 1);

  /// Deliver a request set with global ids and charge the routing formula.
  void route(std::string_view phase, RoutingRequest requests, std::uint64_t units = 1);

  /// Run sub-programs on pairwise disjoint subranges of the active range.
  /// Each sees its range as the active clique; the parent is charged the
  /// maximum of their rounds.
  void parallel_phases(std::string_view phase,
                       const std::vector<std::pair<NodeRange, std::function<void(CliqueWorld&)>>>& branches);

  /// Narrow the active range for the lifetime of the guard.
  class SubClique {
   public:
    SubClique(CliqueWorld& w, NodeRange r);
    ~SubClique() { w_.ranges_.pop_back(); }
    SubClique(const SubClique&) = delete;
    SubClique& operator=(const SubClique&) = delete;

   private:
    CliqueWorld& w_;
  };

  /// Prefix later phase names with `name/` for the lifetime of the guard.
  class Scope {
   public:
    Scope(CliqueWorld& w, std::string_view name);
    ~Scope() { w_.prefix_.resize(saved_); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    CliqueWorld& w_;
    std::size_t saved_;
  };

  /// Observer access for input placement and output collection by the
  /// driver. Throws isolation_error while node-local code is running.
  NodeStore& store(NodeId global);

  [[nodiscard]] std::mt19937_64 node_rng(std::string_view phase, NodeId global) const {
    return make_node_rng(seed_, phase, global);
  }

  void set_parallel_local(bool on) noexcept { parallel_local_ = on; }

  [[nodiscard]] std::string qualified(std::string_view phase) const;

 private:
  void for_each_node(const std::function<void(NodeId, NodeContext&)>& body);

  std::vector<NodeStore> stores_;
  PrimeField field_;
  std::uint64_t seed_;
  CostLedger ledger_;
  std::vector<NodeRange> ranges_;
  std::string prefix_;
  bool in_phase_ = false;
  bool parallel_local_ = false;
};

}  // namespace ccq
