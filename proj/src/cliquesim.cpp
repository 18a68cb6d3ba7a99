#include "ccq/cliquesim.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <sstream>

namespace ccq {

const std::vector<Word>& NodeStore::get(const std::string& key) const {
  auto it = slots_.find(key);
  if (it == slots_.end()) throw isolation_error("node does not hold '" + key + "'");
  return it->second;
}

std::vector<Word>& NodeStore::mut(const std::string& key) {
  auto it = slots_.find(key);
  if (it == slots_.end()) throw isolation_error("node does not hold '" + key + "'");
  return it->second;
}

void NodeStore::erase_prefix(const std::string& prefix) {
  std::erase_if(slots_, [&](const auto& kv) { return kv.first.starts_with(prefix); });
}

std::vector<Envelope> NodeStore::take(Tag tag) {
  auto it = inbox_.find(tag);
  if (it == inbox_.end()) return {};
  auto out = std::move(it->second);
  inbox_.erase(it);
  return out;
}

bool operator==(const PhaseRecord& a, const PhaseRecord& b) {
  return a.name == b.name && a.kind == b.kind && a.subset_size == b.subset_size && a.rounds == b.rounds &&
         a.messages == b.messages && a.branches == b.branches;
}

void CostLedger::record(PhaseRecord r) {
  rounds_ += r.rounds;
  messages_ += r.messages;
  phases_.push_back(std::move(r));
}

std::uint64_t CostLedger::rounds_with_prefix(std::string_view prefix) const {
  std::uint64_t s = 0;
  for (const auto& p : phases_)
    if (std::string_view(p.name).starts_with(prefix)) s += p.rounds;
  return s;
}

std::uint64_t CostLedger::messages_with_prefix(std::string_view prefix) const {
  std::uint64_t s = 0;
  for (const auto& p : phases_)
    if (std::string_view(p.name).starts_with(prefix)) s += p.messages;
  return s;
}

void CostLedger::append_text(std::string& out, int depth) const {
  for (const auto& p : phases_) {
    if (p.kind == PhaseRecord::Kind::local) continue;
    out.append(static_cast<std::size_t>(2 * depth), ' ');
    out += "{phase: " + p.name + ", subset: " + std::to_string(p.subset_size) +
           ", rounds: " + std::to_string(p.rounds) + ", messages: " + std::to_string(p.messages) + "}\n";
    for (const auto& b : p.branches) b.append_text(out, depth + 1);
  }
}

std::string CostLedger::to_text() const {
  std::string out;
  append_text(out, 0);
  out += "{total_rounds: " + std::to_string(rounds_) + ", total_messages: " + std::to_string(messages_) + "}\n";
  return out;
}

std::string CostLedger::to_csv() const {
  std::string out = "phase,rounds,messages\n";
  for (const auto& p : phases_) {
    if (p.kind == PhaseRecord::Kind::local) continue;
    out += p.name + "," + std::to_string(p.rounds) + "," + std::to_string(p.messages) + "\n";
  }
  return out;
}

std::uint64_t payload_units(std::uint64_t bits, std::size_t n) {
  std::uint64_t lg = 0;
  while ((std::uint64_t{1} << lg) < n) ++lg;
  const std::uint64_t width = std::max<std::uint64_t>(2 * lg, 1);
  return std::max<std::uint64_t>(1, (bits + width - 1) / width);
}

std::uint64_t routing_rounds(std::uint64_t load, std::size_t n_active) {
  if (load == 0) return 0;
  return 2 * ((load + n_active - 1) / n_active);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::mt19937_64 make_node_rng(std::uint64_t seed, std::string_view phase, NodeId node) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ fnv1a(phase));
  s = splitmix64(s ^ static_cast<std::uint64_t>(node));
  return std::mt19937_64(s);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

CliqueWorld::CliqueWorld(std::size_t n, PrimeField field, std::uint64_t seed)
    : stores_(n), field_(field), seed_(seed), ranges_{NodeRange{0, n}} {
  if (n == 0) throw std::invalid_argument("clique needs at least one node");
}

std::string CliqueWorld::qualified(std::string_view phase) const { return prefix_ + std::string(phase); }

NodeStore& CliqueWorld::store(NodeId global) {
  if (in_phase_) throw isolation_error("store access from inside a node-local phase");
  if (global >= stores_.size()) throw std::out_of_range("node " + std::to_string(global));
  return stores_[global];
}

namespace {

struct PhaseFlag {
  explicit PhaseFlag(bool& f) : f_(f) { f_ = true; }
  ~PhaseFlag() { f_ = false; }
  bool& f_;
};

}  // namespace

void CliqueWorld::for_each_node(const std::function<void(NodeId, NodeContext&)>& body) {
  const NodeRange r = active();
  PhaseFlag guard(in_phase_);
  const auto count = static_cast<std::int64_t>(r.count);
  std::vector<std::exception_ptr> errors(r.count);
  auto one = [&](std::int64_t j) {
    const NodeId g = r.first + static_cast<NodeId>(j);
    NodeContext ctx(g, r, field_, stores_[g], seed_, prefix_);
    try {
      body(static_cast<NodeId>(j), ctx);
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  };
  if (parallel_local_) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < count; ++j) one(j);
  } else {
    for (std::int64_t j = 0; j < count; ++j) one(j);
  }
  // Report the failure a sequential run would have hit first.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void CliqueWorld::run_local(std::string_view phase, const std::function<void(NodeContext&)>& fn) {
  for_each_node([&](NodeId, NodeContext& ctx) { fn(ctx); });
  ledger_.record({qualified(phase), PhaseRecord::Kind::local, active().count, 0, 0, {}});
}

void CliqueWorld::exchange(std::string_view phase, const std::function<void(NodeContext&, Outbox&)>& producer,
                           std::uint64_t units) {
  const NodeRange r = active();
  std::vector<Outbox> boxes;
  boxes.reserve(r.count);
  for (NodeId j = 0; j < r.count; ++j) boxes.push_back(Outbox(j));
  for_each_node([&](NodeId j, NodeContext& ctx) { producer(ctx, boxes[j]); });
  RoutingRequest req;
  for (auto& b : boxes) {
    for (auto& m : b.msgs_) {
      if (m.destination >= r.count)
        throw routing_error("node " + std::to_string(r.first + m.source) + " addressed relative node " +
                            std::to_string(m.destination) + " outside an active range of " + std::to_string(r.count));
      req.push_back({r.first + m.source, r.first + m.destination, m.tag, std::move(m.payload)});
    }
  }
  route(phase, std::move(req), units);
}

void CliqueWorld::route(std::string_view phase, RoutingRequest requests, std::uint64_t units) {
  const NodeRange r = active();
  std::vector<std::uint64_t> sent(r.count, 0), recv(r.count, 0);
  std::uint64_t total = 0;
  for (const auto& m : requests) {
    if (!r.contains(m.source) || !r.contains(m.destination))
      throw routing_error("message " + std::to_string(m.source) + " -> " + std::to_string(m.destination) +
                          " leaves the active range [" + std::to_string(r.first) + ", " + std::to_string(r.end()) + ")");
    if (m.source == m.destination) continue;  // stays on the node
    const std::uint64_t u = units * m.payload.size();
    sent[m.source - r.first] += u;
    recv[m.destination - r.first] += u;
    total += u;
  }
  std::uint64_t load = 0;
  for (std::size_t j = 0; j < r.count; ++j) load = std::max({load, sent[j], recv[j]});
  for (auto& m : requests) stores_[m.destination].deliver(m.tag, {m.source - r.first, std::move(m.payload)});
  ledger_.record({qualified(phase), PhaseRecord::Kind::route, r.count, routing_rounds(load, r.count), total, {}});
}

void CliqueWorld::parallel_phases(
    std::string_view phase, const std::vector<std::pair<NodeRange, std::function<void(CliqueWorld&)>>>& branches) {
  const NodeRange outer = active();
  for (std::size_t a = 0; a < branches.size(); ++a) {
    const NodeRange& ra = branches[a].first;
    if (ra.count == 0) continue;
    if (ra.first < outer.first || ra.end() > outer.end())
      throw isolation_error("parallel branch leaves the active range");
    for (std::size_t b = a + 1; b < branches.size(); ++b) {
      const NodeRange& rb = branches[b].first;
      if (rb.count != 0 && ra.first < rb.end() && rb.first < ra.end())
        throw isolation_error("parallel branches overlap");
    }
  }
  PhaseRecord rec{qualified(phase), PhaseRecord::Kind::parallel, outer.count, 0, 0, {}};
  for (const auto& [range, program] : branches) {
    CostLedger saved = std::move(ledger_);
    ledger_ = CostLedger{};
    if (range.count != 0) {
      try {
        SubClique sub(*this, range);
        program(*this);
      } catch (...) {
        ledger_ = std::move(saved);
        throw;
      }
    }
    CostLedger child = std::move(ledger_);
    ledger_ = std::move(saved);
    rec.rounds = std::max(rec.rounds, child.total_rounds());
    rec.messages += child.total_messages();
    rec.branches.push_back(std::move(child));
  }
  ledger_.record(std::move(rec));
}

CliqueWorld::SubClique::SubClique(CliqueWorld& w, NodeRange r) : w_(w) {
  const NodeRange& outer = w.active();
  if (r.count == 0 || r.first < outer.first || r.end() > outer.end())
    throw isolation_error("sub-clique must be a nonempty part of the active range");
  w.ranges_.push_back(r);
}

CliqueWorld::Scope::Scope(CliqueWorld& w, std::string_view name) : w_(w), saved_(w.prefix_.size()) {
  w.prefix_ += name;
  w.prefix_ += '/';
}

}  // namespace ccq
