#pragma once

#include <optional>
#include <string>

#include "axon/prefix_graph.hpp"

namespace axon {

enum class Architecture { KoggeStone, BrentKung, Sklansky, HanCarlson };

const char* to_string(Architecture arch);
std::optional<Architecture> architecture_from_string(const std::string& name);

/// Builds one of the classical carry networks. Widths that are not a power of
/// two are produced by generating the next power-of-two structure and pruning
/// everything unreachable from the first `width` column outputs.
///
/// Throws UnsupportedWidth for width == 0. Width 1 yields a graph with no
/// internal nodes (a single bit needs no carry network).
PrefixGraph make_classical(Architecture arch, int width);

}  // namespace axon
