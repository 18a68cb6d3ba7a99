#include "ccq/collective.hpp"

namespace ccq {

namespace {
constexpr Tag kGather = 301, kScatter = 302;
}

void all_gather(CliqueWorld& w, std::string_view phase, const std::string& key, const std::string& out) {
  w.exchange(phase, [&](NodeContext& ctx, Outbox& box) {
    if (!ctx.store().has(key)) return;
    const auto& v = ctx.store().get(key);
    if (v.empty()) return;
    for (std::size_t j = 0; j < ctx.n_active(); ++j) box.send(j, kGather, v);
  });
  w.run_local(std::string(phase) + ".assemble", [&](NodeContext& ctx) {
    std::vector<Word> all;
    for (auto& e : ctx.store().take(kGather)) all.insert(all.end(), e.payload.begin(), e.payload.end());
    ctx.store().put(out, std::move(all));
  });
}

void broadcast(CliqueWorld& w, std::string_view phase, NodeId root, const std::string& key) {
  const std::string piece = key + "#piece";
  const std::string name(phase);
  w.exchange(name + ".scatter", [&](NodeContext& ctx, Outbox& box) {
    if (ctx.rel() != root) return;
    const auto& v = ctx.store().get(key);
    const std::size_t n = ctx.n_active();
    for (std::size_t j = 0; j < n && j < v.size(); ++j) {
      std::vector<Word> part;
      for (std::size_t i = j; i < v.size(); i += n) part.push_back(v[i]);
      box.send(j, kScatter, std::move(part));
    }
  });
  w.run_local(name + ".stage", [&](NodeContext& ctx) {
    auto in = ctx.store().take(kScatter);
    ctx.store().put(piece, in.empty() ? std::vector<Word>{} : std::move(in.front().payload));
  });
  w.exchange(name + ".allgather", [&](NodeContext& ctx, Outbox& box) {
    const auto& v = ctx.store().get(piece);
    if (v.empty()) return;
    for (std::size_t j = 0; j < ctx.n_active(); ++j) box.send(j, kGather, v);
  });
  w.run_local(name + ".assemble", [&](NodeContext& ctx) {
    auto in = ctx.store().take(kGather);
    const std::size_t n = ctx.n_active();
    std::size_t total = 0;
    for (const auto& e : in) total += e.payload.size();
    std::vector<Word> v(total);
    for (const auto& e : in)
      for (std::size_t t = 0; t < e.payload.size(); ++t) v[e.source + t * n] = e.payload[t];
    ctx.store().erase(piece);
    ctx.store().put(key, std::move(v));
  });
}

void gather_to(CliqueWorld& w, std::string_view phase, NodeId root, const std::string& key, const std::string& out) {
  w.exchange(phase, [&](NodeContext& ctx, Outbox& box) {
    if (ctx.store().has(key) && !ctx.store().get(key).empty()) box.send(root, kGather, ctx.store().get(key));
  });
  w.run_local(std::string(phase) + ".assemble", [&](NodeContext& ctx) {
    auto in = ctx.store().take(kGather);
    if (ctx.rel() != root) return;
    std::vector<Word> all;
    for (auto& e : in) all.insert(all.end(), e.payload.begin(), e.payload.end());
    ctx.store().put(out, std::move(all));
  });
}

}  // namespace ccq
