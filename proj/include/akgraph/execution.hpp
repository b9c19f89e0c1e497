#pragma once

namespace akgraph {

// Selects the plain loop or the OpenMP loop for the data-parallel kernels.
// Both produce identical results.
enum class Execution { serial, parallel };

} // namespace akgraph
