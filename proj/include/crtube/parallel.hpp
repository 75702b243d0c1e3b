#pragma once

namespace crtube {

/// Execution mode for the data-parallel kernels (series products, constraint
/// assembly, batch row reduction). Results are required to be bit-identical
/// in both modes; the serial path is the reference implementation.
enum class ExecMode { Serial, Parallel };

ExecMode& execMode();

inline bool parallelEnabled() { return execMode() == ExecMode::Parallel; }

}  // namespace crtube
