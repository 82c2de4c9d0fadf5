#pragma once

namespace ewc {

/// Selects between the OpenMP kernel and its serial reference. Both paths
/// produce identical results; the serial one exists for testing and benchmarks.
enum class Execution { serial, parallel };

}  // namespace ewc
