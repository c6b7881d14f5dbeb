#pragma once

#include <string>

#include "vial/sba_graph.hpp"

namespace vial {

// Versioned binary cache of a built network. Local artifact only: the
// layout is native-endian and rejected on version mismatch.
void save_snapshot(const SbaNetwork& network, const std::string& path);
SbaNetwork load_snapshot(const std::string& path);

}  // namespace vial
