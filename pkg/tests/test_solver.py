import copy

import numpy as np
import pytest

import altismooth as alt
from altismooth import NonFiniteError, ShapeMismatchError, SolverConfig
from altismooth.gmrf import EnergyState, NoiseState
from altismooth.kernels import build_correlation, decompose
from altismooth.solver import (
    SolverState,
    _initial_state,
    _sweep,
    chunk_slices,
    cost,
    cost_from_stats,
    denoise,
    denoise_stream,
)

import oracles


def brown_block(consts, num_signals, seed, looks=90.0):
    traj = alt.make_trajectory(
        "smooth-random", num_signals, swh_range=(3.4, 5.4),
        tau_range=(14.3, 15.0), pu_range=(150.0, 190.0), seed=seed,
        consts=consts,
    )
    clean = alt.clean_block(traj, consts)
    noisy = alt.corrupt(clean, alt.NoiseSpec(looks=looks, seed=seed + 1))
    return clean, noisy


class TestCost:
    def test_single_gate_single_signal_hand_value(self):
        # K=1, M=1, y=s=3, all variances and auxiliaries 1, couplings 2:
        # noise side: shape (2 + 0.5 + 1) * log 1 + (0 + 4)/2 = 2
        # energy side: (9 + 4)/2 = 6.5; aux logs vanish => total 8.5
        basis = decompose(build_correlation(1, jitter=0.0))
        state = SolverState(
            denoised=np.array([[3.0]]),
            noise=NoiseState(np.array([1.0]), np.array([1.0]), 2.0),
            energy=EnergyState(np.array([1.0]), np.array([1.0]), 2.0),
        )
        got = cost(state, np.array([[3.0]]), basis)
        assert got == pytest.approx(8.5, rel=1e-12)

    def test_matches_naive_oracle_on_random_states(self):
        rng = np.random.default_rng(3)
        for K, M in ((1, 1), (5, 3), (104, 20)):
            resid = rng.uniform(0.0, 30.0, K)
            quads = rng.uniform(0.0, 30.0, K)
            noise = NoiseState(rng.uniform(0.1, 5.0, K), rng.uniform(0.1, 5.0, K), 2.0)
            energy = EnergyState(rng.uniform(0.1, 5.0, K), rng.uniform(0.1, 5.0, K), 3.0)
            got = cost_from_stats(resid, quads, noise, energy, M)
            want = oracles.naive_cost(noise.variances, noise.aux, 2.0, resid,
                                      energy.variances, energy.aux, 3.0, quads, M)
            assert got == pytest.approx(want, rel=1e-12)

    def test_doubling_one_aux_changes_cost_analytically(self):
        rng = np.random.default_rng(4)
        K, M = 12, 7
        resid = rng.uniform(0.0, 30.0, K)
        quads = rng.uniform(0.0, 30.0, K)
        zeta = 2.0
        noise = NoiseState(rng.uniform(0.1, 5.0, K), rng.uniform(0.1, 5.0, K), zeta)
        energy = EnergyState(rng.uniform(0.1, 5.0, K), rng.uniform(0.1, 5.0, K), 3.0)
        base = cost_from_stats(resid, quads, noise, energy, M)
        k = 5  # interior aux, couples variances[4] and variances[5]
        w = noise.aux[k]
        bumped = NoiseState(noise.variances, noise.aux.copy(), zeta)
        bumped.aux[k] = 2.0 * w
        got_delta = cost_from_stats(resid, quads, bumped, energy, M) - base
        want_delta = -(2 * zeta - 1) * np.log(2.0) + zeta * w * (
            1.0 / noise.variances[k - 1] + 1.0 / noise.variances[k]
        )
        assert got_delta == pytest.approx(want_delta, rel=1e-10)

    def test_rejects_non_positive_state(self):
        basis = decompose(build_correlation(1))
        state = SolverState(
            denoised=np.array([[1.0]]),
            noise=NoiseState(np.array([1.0]), np.array([1.0]), 2.0),
            energy=EnergyState(np.array([1.0]), np.array([1.0]), 2.0),
        )
        state.noise.variances = np.array([-1.0])  # corrupt after construction
        with pytest.raises(NonFiniteError):
            cost(state, np.array([[1.0]]), basis)


class TestDenoise:
    def test_initialisation_follows_contract(self, consts):
        _, noisy = brown_block(consts, 40, seed=9)
        config = SolverConfig()
        denoised, noise, energy = _initial_state(noisy, config)
        mean_wave = noisy.mean(axis=1)
        assert np.array_equal(denoised, np.repeat(mean_wave[:, None], 40, axis=1))
        assert np.array_equal(noise.variances,
                              np.maximum(mean_wave, config.variance_floor))
        assert np.all(energy.variances == 10.0)
        assert np.all(noise.aux == 1e-12) and np.all(energy.aux == 1e-12)

    def test_descent_and_convergence(self, consts):
        clean, noisy = brown_block(consts, 200, seed=5)
        state = denoise(noisy)
        trace = np.array(state.cost_trace)
        assert state.stop_reason == "converged"
        assert np.all(np.diff(trace) <= 1e-9 * np.abs(trace[:-1]))
        assert alt.rsnr(clean, state.denoised) > alt.rsnr(clean, noisy) + 5.0

    def test_noiseless_block_passes_through(self, consts):
        clean, _ = brown_block(consts, 150, seed=6)
        state = denoise(clean)
        assert alt.rsnr(clean, state.denoised) >= 40.0

    def test_single_signal_degenerates_to_shrinkage(self, consts):
        _, noisy = brown_block(consts, 1, seed=7)
        state = denoise(noisy)
        assert state.stop_reason == "converged"
        assert state.iterations <= 100
        assert np.all(np.isfinite(state.denoised))

    def test_stationarity_at_convergence(self, consts):
        _, noisy = brown_block(consts, 120, seed=8)
        config = SolverConfig()
        basis = decompose(build_correlation(120, config.lengthscale, config.jitter))
        state = denoise(noisy, config, basis)
        assert state.stop_reason == "converged"
        noise = copy.deepcopy(state.noise)
        energy = copy.deepcopy(state.energy)
        coeffs = noisy @ basis.vectors
        denoised, _ = _sweep(noisy, coeffs, basis, noise, energy, config)

        def rel(a, b):
            return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-30)

        assert rel(denoised, state.denoised) <= 10 * config.xi
        assert rel(noise.variances, state.noise.variances) <= 10 * config.xi
        assert rel(energy.variances, state.energy.variances) <= 10 * config.xi
        assert rel(noise.aux, state.noise.aux) <= 10 * config.xi
        assert rel(energy.aux, state.energy.aux) <= 10 * config.xi

    def test_matches_dense_reference_solver(self, consts):
        # independent coordinate-descent loop using dense solves throughout
        _, noisy = brown_block(consts, 40, seed=10)
        config = SolverConfig(xi=1e-15, t_max=12)
        fast = denoise(noisy, config).denoised

        K, M = noisy.shape
        idx = np.arange(M, dtype=float)
        corr = np.exp(-((idx[:, None] - idx[None, :]) / config.lengthscale) ** 2)
        corr[np.diag_indices(M)] += config.jitter

        mean_wave = noisy.mean(axis=1)
        nv = np.maximum(mean_wave, config.variance_floor)
        ev = np.full(K, 10.0)
        na = np.full(K, 1e-12)
        ea = np.full(K, 1e-12)
        dense = None
        for _ in range(config.t_max):
            dense = np.empty_like(noisy)
            quads = np.empty(K)
            for k in range(K):
                lhs = (nv[k] / ev[k]) * np.eye(M) + corr
                dense[k] = np.linalg.solve(lhs, corr @ noisy[k])
                quads[k] = dense[k] @ np.linalg.solve(corr, dense[k])
            resid = ((noisy - dense) ** 2).sum(axis=1)
            for arr, aux, stats, c in ((nv, na, resid, config.zeta),
                                       (ev, ea, quads, config.eta)):
                for k in range(K):
                    if k == K - 1:
                        arr[k] = (stats[k] + 2 * c * aux[k]) / (2 * c + M + 2)
                    else:
                        arr[k] = (stats[k] + 2 * c * (aux[k] + aux[k + 1])) / (4 * c + M + 2)
                    arr[k] = max(arr[k], config.variance_floor)
                aux[0] = (2 * c - 1) * arr[0] / c
                for k in range(1, K):
                    aux[k] = (2 * c - 1) / (c * (1 / arr[k - 1] + 1 / arr[k]))

        rel = np.linalg.norm(fast - dense) / np.linalg.norm(dense)
        assert rel <= 1e-6

    def test_input_validation(self):
        with pytest.raises(ShapeMismatchError):
            denoise(np.ones(5))
        with pytest.raises(NonFiniteError):
            denoise(np.array([[1.0, np.nan], [0.0, 1.0]]))
        basis = decompose(build_correlation(3))
        with pytest.raises(ShapeMismatchError):
            denoise(np.ones((4, 2)), basis=basis)


class TestStream:
    def test_chunk_slices_partition(self):
        slices = chunk_slices(5000, 250)
        assert len(slices) == 20
        assert slices[0] == slice(0, 250) and slices[-1] == slice(4750, 5000)
        ragged = chunk_slices(103, 25)
        assert [s.stop - s.start for s in ragged] == [25, 25, 25, 25, 3]
        with pytest.raises(ValueError):
            chunk_slices(10, 0)

    def test_single_chunk_equals_denoise(self, consts):
        _, noisy = brown_block(consts, 60, seed=11)
        assert np.array_equal(denoise_stream(noisy, 60), denoise(noisy).denoised)

    def test_chunks_are_independent(self, consts):
        _, noisy = brown_block(consts, 90, seed=12)
        streamed = denoise_stream(noisy, 30)
        by_hand = np.hstack([
            denoise(noisy[:, i:i + 30]).denoised for i in (0, 30, 60)
        ])
        assert np.array_equal(streamed, by_hand)

    def test_parallel_matches_serial_bitwise(self, consts):
        _, noisy = brown_block(consts, 100, seed=13)
        serial = denoise_stream(noisy, 24, threads=1)
        parallel = denoise_stream(noisy, 24, threads=4)
        assert np.array_equal(serial, parallel)

    def test_with_states_returns_traces(self, consts):
        _, noisy = brown_block(consts, 50, seed=14)
        block, states = denoise_stream(noisy, 20, with_states=True)
        assert len(states) == 3
        assert all(len(s.cost_trace) == s.iterations for s in states)
        assert np.array_equal(block[:, :20], states[0].denoised)
