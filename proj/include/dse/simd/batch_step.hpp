#pragma once

#include <string_view>

#include "dse/linalg.hpp"
#include "dse/machine_model.hpp"
#include "dse/simd/kernel_args.hpp"

namespace dse::simd {

enum class Level { scalar, avx2 };

std::string_view level_name(Level level);

// True when the AVX2 kernel was compiled in and the running CPU supports AVX2+FMA.
bool avx2_available();

/// Best available level, overridable through DSE_SIMD=scalar|avx2.
/// Requesting avx2 on a machine without it falls back to scalar.
Level detect_level();

using BatchStepFn = void (*)(const SmibLanes& lanes, const SmibKernelArgs& args);

// Scalar reference: advances each lane with step_discrete.
void batch_step_scalar(const SmibLanes& lanes, const SmibKernelArgs& args);

// AVX2 body with scalar tail. Only valid when avx2_available().
void batch_step_avx2(const SmibLanes& lanes, const SmibKernelArgs& args);

BatchStepFn batch_step_for(Level level);
BatchStepFn select_batch_step();

SmibKernelArgs make_kernel_args(const InputVector& u, const MachineParams& p, double dt);

/// Advances every column of a 4 x m matrix by one RK4 step using `kernel`.
/// Throws NumericalError if any resulting entry is non-finite.
void step_columns(BatchStepFn kernel, Mat& points, const InputVector& u, const MachineParams& p, double dt);

} // namespace dse::simd
