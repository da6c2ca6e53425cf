#pragma once

namespace shapekit {

/// Execution policy for the data-parallel kernels. The serial path is the
/// reference implementation; both must produce identical results.
enum class Exec { serial, parallel };

}  // namespace shapekit
