#!/usr/bin/env python3
"""Denoise a speckled track with the coordinate-descent solver.

The solver treats each gate's evolution across signals as a smooth Gaussian
process and estimates, jointly with the signals, a per-gate noise variance
and a per-gate signal-energy variance, both smoothed along the gate axis by
coupled auxiliary chains.  Every update is closed-form, so each sweep is one
matrix product plus vector work, and the negative log posterior decreases
monotonically until the relative change drops below the threshold.
"""

import numpy as np

from altismooth import (
    NoiseSpec,
    SolverConfig,
    clean_block,
    corrupt,
    denoise,
    denoise_stream,
    input_rsnr,
    jason2_like,
    make_trajectory,
    rsnr,
)

consts = jason2_like()
traj = make_trajectory("smooth-random", 1500, swh_range=(3.4, 5.4),
                       tau_range=(14.3, 15.0), pu_range=(150.0, 190.0),
                       seed=3, consts=consts)
clean = clean_block(traj, consts)
noisy = corrupt(clean, NoiseSpec(looks=90, seed=4))
print(f"track: {noisy.shape[0]} x {noisy.shape[1]}, "
      f"input RSNR {input_rsnr(clean, noisy):.2f} dB\n")

# One 500-signal block, watching the cost trace.
state = denoise(noisy[:, :500], SolverConfig())
print("single 500-signal block:")
print(f"  stopped: {state.stop_reason} after {state.iterations} sweeps")
print("  cost trace:", "  ".join(f"{v:.4g}" for v in state.cost_trace))
print(f"  output RSNR {rsnr(clean[:, :500], state.denoised):.2f} dB\n")

# The estimated noise variances track the speckle's signal-dependent power.
mid = 60
sigma2 = state.noise.variances[mid]
expected = (clean[mid, :500] ** 2).mean() / 90.0
print(f"estimated noise variance at gate {mid + 1}: {sigma2:8.2f} "
      f"(speckle theory says ~{expected:.2f})\n")

# Chunked processing of the whole track; chunk width trades runtime for a
# slightly better posterior (longer smoothness context).
for chunk in (100, 250, 500, 1500):
    out = denoise_stream(noisy, chunk)
    print(f"  chunk {chunk:5d}: output RSNR {rsnr(clean, out):6.2f} dB")
print("\nruns are deterministic and chunks are independent, so serial and "
      "threaded streams agree bit for bit:")
a = denoise_stream(noisy, 250, threads=1)
b = denoise_stream(noisy, 250, threads=4)
print("  bit-identical:", bool(np.array_equal(a, b)))
