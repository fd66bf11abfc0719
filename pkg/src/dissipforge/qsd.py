"""Linear quantum-state-diffusion trajectories in the Markov limit.

Each unnormalized trajectory obeys d(psi)/dt = [L z*_t - (gamma/2) L^dag L] psi,
driven by complex white noise of intensity gamma (E[z z*] = gamma / dt per
step, E[z z] = 0). Averaging the unnormalized projectors |psi><psi| over
trajectories reproduces the master-equation density matrix; the linear form
does not preserve single-trajectory norms, only the ensemble trace.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lindblad import EvolutionRecord
from .states import PureState

NORM_LIMIT = 1e6
THREADS_ENV = "DISSIPFORGE_THREADS"


class TrajectoryOverflow(RuntimeError):
    """A trajectory norm exceeded the overflow limit."""


class EnsembleError(RuntimeError):
    """More than 1% of trajectories were excluded."""


@dataclass(frozen=True)
class TrajectoryConfig:
    """Ensemble size, discretization, seeding, and noise intensity."""

    n_traj: int
    dt: float
    t_max: float
    master_seed: int = 0
    gamma: float = 1.0

    def __post_init__(self):
        if self.n_traj < 1:
            raise ValueError(f"n_traj must be at least 1, got {self.n_traj}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.t_max < self.dt:
            raise ValueError(f"t_max = {self.t_max} is below one step dt = {self.dt}")

    @property
    def n_steps(self) -> int:
        return max(int(round(self.t_max / self.dt)), 1)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True, eq=False)
class NoisePath:
    """Per-step complex increments z*_k for one trajectory."""

    increments: np.ndarray

    def __post_init__(self):
        inc = np.asarray(self.increments, dtype=complex).reshape(-1).copy()
        inc.setflags(write=False)
        object.__setattr__(self, "increments", inc)


def sample_noise(cfg: TrajectoryConfig, traj_index: int) -> NoisePath:
    """Gaussian increments, reproducible from (master_seed, trajectory index).

    Real and imaginary parts each have variance gamma / (2 dt), so
    E[|z|^2] = gamma / dt and E[z z] = 0. The stream split uses numpy's
    SeedSequence with the trajectory index as spawn key, so paths are
    independent and order-insensitive.
    """
    seq = np.random.SeedSequence(cfg.master_seed, spawn_key=(int(traj_index),))
    raw = np.random.default_rng(seq).standard_normal((2, cfg.n_steps))
    scale = np.sqrt(cfg.gamma / (2.0 * cfg.dt))
    return NoisePath(scale * (raw[0] + 1j * raw[1]))


@dataclass(eq=False)
class Trajectory:
    """Times and unnormalized state vectors of a single realization."""

    times: np.ndarray
    states: np.ndarray  # (n_steps + 1, d)


def _as_vector(psi0) -> np.ndarray:
    v = np.asarray(
        psi0.amplitudes if isinstance(psi0, PureState) else psi0, dtype=complex
    ).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("initial state must be normalized")
    return v


def evolve_trajectory(L: np.ndarray, cfg: TrajectoryConfig, psi0, noise: NoisePath) -> Trajectory:
    """Euler-Maruyama propagation of one unnormalized trajectory.

    psi_{k+1} = psi_k + dt [L z*_k - (gamma/2) L^dag L] psi_k. Norms above
    NORM_LIMIT abort with TrajectoryOverflow.
    """
    L = np.asarray(L, dtype=complex)
    psi = _as_vector(psi0)
    if L.shape != (psi.size, psi.size):
        raise ValueError(f"operator shape {L.shape} does not match state dimension {psi.size}")
    if noise.increments.size != cfg.n_steps:
        raise ValueError("noise path length does not match the configured step count")
    drift = -0.5 * cfg.gamma * (L.conj().T @ L)
    out = np.empty((cfg.n_steps + 1, psi.size), dtype=complex)
    out[0] = psi
    for k in range(cfg.n_steps):
        psi = psi + cfg.dt * (noise.increments[k] * (L @ psi) + drift @ psi)
        nrm = np.linalg.norm(psi)
        if not np.isfinite(nrm) or nrm > NORM_LIMIT:
            raise TrajectoryOverflow(
                f"trajectory norm {nrm:.3e} exceeded {NORM_LIMIT:.0e} at step {k + 1}"
            )
        out[k + 1] = psi
    return Trajectory(cfg.times, out)


@dataclass(eq=False)
class EnsembleResult:
    """Ensemble mean of unnormalized projectors with elementwise standard errors."""

    times: np.ndarray
    rho_mean: np.ndarray  # (T, d, d)
    rho_se: np.ndarray  # (T, d, d) real; combined spread of real and imaginary parts
    n_traj: int
    excluded: tuple[int, ...]

    @property
    def n_excluded(self) -> int:
        return len(self.excluded)

    def record(self, target=None) -> EvolutionRecord:
        """View the ensemble mean as an evolution record (diagnostics included)."""
        traces = np.einsum("tii->t", self.rho_mean).real
        herm = (self.rho_mean + self.rho_mean.conj().transpose(0, 2, 1)) / 2.0
        min_eigs = np.array([np.linalg.eigvalsh(h)[0].real for h in herm])
        fids = None
        if target is not None:
            v = np.asarray(
                target.amplitudes if isinstance(target, PureState) else target, dtype=complex
            )
            fids = np.einsum("i,tij,j->t", v.conj(), self.rho_mean, v).real
        return EvolutionRecord(self.times, self.rho_mean, np.abs(traces - 1.0), min_eigs, fids)

    def to_json_obj(self) -> dict:
        flat_mean = [
            [float(z.real), float(z.imag)] for z in self.rho_mean.reshape(-1)
        ]
        return {
            "n_traj": self.n_traj,
            "excluded": self.n_excluded,
            "times": [float(t) for t in self.times],
            "rho_mean": flat_mean,
            "rho_se": [float(x) for x in self.rho_se.reshape(-1)],
        }


class _ChunkOverflow(Exception):
    def __init__(self, indices):
        self.indices = tuple(indices)


def _chunk_sums(L, drift, cfg, psi0, lo, hi, excluded):
    """Evolve trajectories [lo, hi) together, accumulating projector sums.

    Raises _ChunkOverflow with the offending global indices the first time
    any live trajectory exceeds NORM_LIMIT; excluded rows ride along as
    zeros and contribute nothing.
    """
    count = hi - lo
    d = psi0.size
    noise = np.stack([sample_noise(cfg, i).increments for i in range(lo, hi)])
    Psi = np.tile(psi0, (count, 1))
    for i in excluded:
        if lo <= i < hi:
            Psi[i - lo] = 0.0
    LT = L.T.copy()
    DT = drift.T.copy()
    T = cfg.n_steps + 1
    s_outer = np.empty((T, d, d), dtype=complex)
    s_abs2 = np.empty((T, d, d))
    prob = Psi.real**2 + Psi.imag**2
    s_outer[0] = Psi.T @ Psi.conj()
    s_abs2[0] = prob.T @ prob
    for k in range(1, T):
        Psi = Psi + cfg.dt * (noise[:, k - 1, None] * (Psi @ LT) + Psi @ DT)
        prob = Psi.real**2 + Psi.imag**2
        norms2 = prob.sum(axis=1)
        bad = ~np.isfinite(norms2) | (norms2 > NORM_LIMIT**2)
        if np.any(bad):
            raise _ChunkOverflow(lo + np.nonzero(bad)[0])
        s_outer[k] = Psi.T @ Psi.conj()
        s_abs2[k] = prob.T @ prob
    return s_outer, s_abs2


def _resolve_workers(max_workers) -> int:
    if max_workers is not None:
        return max(int(max_workers), 1)
    env = os.environ.get(THREADS_ENV)
    return max(int(env), 1) if env else 1


def ensemble_average(
    L: np.ndarray,
    cfg: TrajectoryConfig,
    psi0,
    chunk_size: int = 256,
    max_workers: int | None = None,
) -> EnsembleResult:
    """Mean and standard error of unnormalized projectors over an ensemble.

    Noise paths derive from (master_seed, index), so the ensemble is
    reproducible regardless of chunking or thread count; partial sums fold
    in fixed chunk order. Diverging trajectories are dropped and counted,
    and more than 1% exclusions raises EnsembleError. max_workers defaults
    to the DISSIPFORGE_THREADS environment variable (or 1).
    """
    L = np.asarray(L, dtype=complex)
    psi0 = _as_vector(psi0)
    if L.shape != (psi0.size, psi0.size):
        raise ValueError(f"operator shape {L.shape} does not match state dimension {psi0.size}")
    drift = -0.5 * cfg.gamma * (L.conj().T @ L)
    budget = int(0.01 * cfg.n_traj)
    excluded: set[int] = set()

    def run_chunk(bounds):
        lo, hi = bounds
        local: set[int] = set(i for i in excluded if lo <= i < hi)
        while True:
            try:
                sums = _chunk_sums(L, drift, cfg, psi0, lo, hi, local)
                return sums, local
            except _ChunkOverflow as ov:
                local |= set(int(i) for i in ov.indices)
                if len(local) > budget + 1:
                    raise EnsembleError(
                        f"more than 1% of trajectories diverged ({len(local)} in chunk "
                        f"[{lo}, {hi}) alone, budget {budget})"
                    ) from None

    chunks = [(lo, min(lo + chunk_size, cfg.n_traj)) for lo in range(0, cfg.n_traj, chunk_size)]
    workers = _resolve_workers(max_workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_chunk, chunks))
    else:
        results = [run_chunk(c) for c in chunks]

    T = cfg.n_steps + 1
    d = psi0.size
    total_outer = np.zeros((T, d, d), dtype=complex)
    total_abs2 = np.zeros((T, d, d))
    for (s_outer, s_abs2), local in results:
        total_outer += s_outer
        total_abs2 += s_abs2
        excluded |= local

    if len(excluded) > budget:
        raise EnsembleError(
            f"{len(excluded)} of {cfg.n_traj} trajectories diverged (> 1%)"
        )
    n_valid = cfg.n_traj - len(excluded)
    mean = total_outer / n_valid
    var = np.maximum(total_abs2 / n_valid - np.abs(mean) ** 2, 0.0)
    se = np.sqrt(var / max(n_valid - 1, 1))
    return EnsembleResult(cfg.times, mean, se, cfg.n_traj, tuple(sorted(excluded)))
