#pragma once

#include "dynhs/engine.hpp"

namespace dynhs {

// Reiter's HS-Tree, built from scratch. Returns diagnoses in emission order.
Collection run_hs_tree(const Dpi& dpi, const Acquired& acq, const EngineConfig& cfg, ConflictFinder& finder,
                       Counters& counters, TreeTrace* trace = nullptr);

}  // namespace dynhs
