#pragma once

#include <string>
#include <string_view>

#include "ccq/cliquesim.hpp"

namespace ccq {

// Charged vector collectives on the active range. Keys name NodeStore slots.

/// Every node contributes the words under `key` (possibly none); afterwards
/// every node holds their concatenation in node order under `out`.
void all_gather(CliqueWorld& w, std::string_view phase, const std::string& key, const std::string& out);

/// The words under `key` at relative node `root` reach every node, under the
/// same key: scattered round-robin, then all-gathered.
void broadcast(CliqueWorld& w, std::string_view phase, NodeId root, const std::string& key);

/// Concatenation of every node's `key` in node order, stored at `root` under `out`.
void gather_to(CliqueWorld& w, std::string_view phase, NodeId root, const std::string& key, const std::string& out);

}  // namespace ccq
