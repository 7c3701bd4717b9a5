#pragma once

namespace shrinkage {

// Parallel kernels keep a serial path that must give the same bits.
enum class Execution { Serial, Parallel };

}  // namespace shrinkage
