"""State-vector emulation of a neutral-atom register and a one-layer QAOA MIS sampler.

Units: time in µs, distance in µm, every frequency in rad/µs (ħ = 1). Basis
index bit ``i`` is qubit ``i``; ``|1>`` is the Rydberg state. The Pauli-Z
operator is taken with eigenvalue +1 on ``|1>`` so that ``n_i = (1 + Z_i)/2``
is the Rydberg occupation, and the machine Hamiltonian is

    H = sum_i (Ω/2) X_i - sum_i (δ/2) Z_i + sum_{i<j} C6/d_ij^6 n_i n_j.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .graph import Graph
from .optimize import OptimizeResult, nelder_mead
from .sampling import SampleHistogram, derive_seed

TWO_PI = 2.0 * math.pi
DEFAULT_C6 = 5_420_158.53
EMULATOR_MAX_QUBITS = 15
# above this register size evolution switches from dense eigh to sparse expm
DENSE_MAX_QUBITS = 10


class EmbeddingError(ValueError):
    """No Rabi frequency within the device caps reproduces the graph."""


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class DeviceSpec:
    max_amp: float = TWO_PI * 12.0
    max_det: float = TWO_PI * 12.0
    max_duration: float = 3.0
    c6: float = DEFAULT_C6

    def __post_init__(self):
        for name in ("max_amp", "max_det", "max_duration", "c6"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_mhz(cls, max_amp_mhz=12.0, max_det_mhz=12.0, max_duration_us=3.0, c6=DEFAULT_C6):
        return cls(TWO_PI * max_amp_mhz, TWO_PI * max_det_mhz, max_duration_us, c6)

    @property
    def min_blockade_radius(self) -> float:
        """Blockade radius at the largest allowed Rabi frequency."""
        return blockade_radius(self.c6, self.max_amp)


def blockade_radius(c6: float, omega: float) -> float:
    return (c6 / omega) ** (1.0 / 6.0)


@dataclass(frozen=True)
class Register:
    positions: tuple
    omega: float
    c6: float = DEFAULT_C6

    def __post_init__(self):
        pos = tuple((float(x), float(y)) for x, y in self.positions)
        object.__setattr__(self, "positions", pos)
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        for i, j in combinations(range(len(pos)), 2):
            if math.dist(pos[i], pos[j]) == 0.0:
                raise ValueError(f"atoms {i} and {j} coincide")

    @classmethod
    def with_blockade_radius(cls, positions, r_b: float, c6: float = DEFAULT_C6) -> "Register":
        return cls(positions, c6 / r_b ** 6, c6)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def r_b(self) -> float:
        return blockade_radius(self.c6, self.omega)

    def induced_adjacency(self) -> list[int]:
        """Adjacency rows of the unit-disk graph at the blockade radius."""
        adj = [0] * self.n
        r = self.r_b
        for i, j in combinations(range(self.n), 2):
            if math.dist(self.positions[i], self.positions[j]) < r:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        return adj


def embed(g: Graph, spec: DeviceSpec, rescale: bool = False,
          max_qubits: int = EMULATOR_MAX_QUBITS) -> Register:
    """Place the atoms at ``g``'s coordinates and pick a Rabi frequency.

    The blockade radius must fall strictly between the longest edge and the
    shortest non-edge while the Rabi frequency stays within ``spec.max_amp``.
    With ``rescale`` the coordinates may be stretched uniformly to make room.
    """
    if g.coords is None:
        raise EmbeddingError("graph has no coordinates")
    if g.n > max_qubits:
        raise EmbeddingError(f"{g.n} atoms exceed the emulator limit of {max_qubits}")
    pos = np.array(g.coords, dtype=float).reshape(g.n, 2)
    edge_d, non_d = [], []
    for i, j in combinations(range(g.n), 2):
        (edge_d if g.adj[i] >> j & 1 else non_d).append(math.dist(pos[i], pos[j]))
    lo = max(edge_d, default=0.0)
    hi = min(non_d, default=math.inf)
    if lo >= hi:
        raise EmbeddingError("coordinates do not realize the graph as a unit-disk graph")
    r_min = spec.min_blockade_radius
    if hi <= r_min:
        if not rescale:
            raise EmbeddingError(
                f"needs a blockade radius below {hi:.3f} µm; device minimum is {r_min:.3f} µm")
        scale = 1.25 * r_min / hi
        pos, lo, hi = pos * scale, lo * scale, hi * scale
    if math.isinf(hi):
        r_b = max(r_min, 1.25 * lo)
    else:
        r_b = math.sqrt(max(lo, r_min) * hi)
    reg = Register(tuple(map(tuple, pos)), min(spec.c6 / r_b ** 6, spec.max_amp), spec.c6)
    if reg.induced_adjacency() != list(g.adj):
        raise EmbeddingError("blockade graph differs from the target graph")
    return reg


@dataclass(frozen=True)
class Segment:
    omega: float
    delta: float
    duration: float


class PulseSchedule:
    """Piecewise-constant drive, validated against a device on construction."""

    def __init__(self, segments, device: DeviceSpec):
        segs = tuple(s if isinstance(s, Segment) else Segment(*map(float, s)) for s in segments)
        total = 0.0
        for s in segs:
            if not s.duration > 0:
                raise ScheduleError("segment durations must be positive")
            if abs(s.omega) > device.max_amp * (1 + 1e-12):
                raise ScheduleError(f"|omega|={abs(s.omega):.4g} exceeds {device.max_amp:.4g} rad/µs")
            if abs(s.delta) > device.max_det * (1 + 1e-12):
                raise ScheduleError(f"|delta|={abs(s.delta):.4g} exceeds {device.max_det:.4g} rad/µs")
            total += s.duration
        if total > device.max_duration * (1 + 1e-12):
            raise ScheduleError(f"total duration {total:.4g} µs exceeds {device.max_duration:.4g} µs")
        self._segments = segs
        self.device = device

    @property
    def segments(self) -> tuple:
        return self._segments

    @property
    def duration(self) -> float:
        return sum(s.duration for s in self._segments)

    def to_list(self) -> list:
        return [asdict(s) for s in self._segments]


def occupations(n: int) -> np.ndarray:
    """``occ[x, i]`` is the Rydberg occupation of qubit ``i`` in basis state ``x``."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(float)


def interaction_diagonal(register: Register) -> np.ndarray:
    n = register.n
    occ = occupations(n)
    diag = np.zeros(1 << n)
    for i, j in combinations(range(n), 2):
        v = register.c6 / math.dist(register.positions[i], register.positions[j]) ** 6
        diag += v * occ[:, i] * occ[:, j]
    return diag


def hamiltonian_diagonal(register: Register, delta: float) -> np.ndarray:
    occ = occupations(register.n)
    z = 2.0 * occ - 1.0
    return -0.5 * delta * z.sum(axis=1) + interaction_diagonal(register)


def _drive_matrix(n: int):
    dim = 1 << n
    rows = np.repeat(np.arange(dim), n)
    cols = rows ^ np.tile(1 << np.arange(n), dim)
    return sp.csr_matrix((np.ones(dim * n), (rows, cols)), shape=(dim, dim))


def hamiltonian(register: Register, omega: float, delta: float, sparse: bool = False):
    """Machine Hamiltonian as a real symmetric matrix (dense ndarray or CSR)."""
    if register.n > EMULATOR_MAX_QUBITS:
        raise ValueError(f"{register.n} qubits exceed the emulator limit")
    h = sp.diags(hamiltonian_diagonal(register, delta)) + 0.5 * omega * _drive_matrix(register.n)
    h = h.tocsr()
    return h if sparse else h.toarray()


class Propagator:
    """Applies piecewise-constant evolution on one register, caching per-segment spectra."""

    def __init__(self, register: Register):
        self.register = register
        self._cache = {}

    def _diag(self, delta):
        key = ("diag", delta)
        if key not in self._cache:
            self._cache[key] = hamiltonian_diagonal(self.register, delta)
        return self._cache[key]

    def _eig(self, omega, delta):
        key = ("eig", omega, delta)
        if key not in self._cache:
            self._cache[key] = np.linalg.eigh(hamiltonian(self.register, omega, delta))
        return self._cache[key]

    def step(self, psi: np.ndarray, omega: float, delta: float, t: float) -> np.ndarray:
        if omega == 0.0:
            return np.exp(-1j * t * self._diag(delta)) * psi
        if self.register.n <= DENSE_MAX_QUBITS:
            w, v = self._eig(omega, delta)
            return v @ (np.exp(-1j * t * w) * (v.T @ psi))
        key = ("csr", omega, delta)
        if key not in self._cache:
            self._cache[key] = hamiltonian(self.register, omega, delta, sparse=True)
        return expm_multiply(-1j * t * self._cache[key], psi)

    def evolve(self, psi: np.ndarray, schedule: PulseSchedule) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (1 << self.register.n,):
            raise ValueError("state dimension does not match the register")
        for s in schedule.segments:
            psi = self.step(psi, s.omega, s.delta, s.duration)
        return psi


def ground_state(n: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    return psi


def evolve(state, register: Register, schedule: PulseSchedule) -> np.ndarray:
    return Propagator(register).evolve(state, schedule)


def measure(state, shots: int, seed: int) -> SampleHistogram:
    """Sample computational-basis outcomes; bit ``i`` of a key is qubit ``i``."""
    if int(shots) < 1:
        raise ValueError("shots must be at least 1")
    probs = np.abs(np.asarray(state)) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"state is not normalized (norm² = {total:.8f})")
    n = int(probs.size).bit_length() - 1
    draws = np.random.default_rng(seed).multinomial(int(shots), probs / total)
    nz = np.flatnonzero(draws)
    return SampleHistogram(n, {int(x): int(draws[x]) for x in nz}, "emulator", seed, int(shots))


def _conflicts(g: Graph, z: int) -> int:
    total = 0
    rest = z
    while rest:
        low = rest & -rest
        total += (g.adj[low.bit_length() - 1] & z).bit_count()
        rest ^= low
    return total // 2


def qaoa_energy(histogram: SampleHistogram, g: Graph, penalty: float) -> float:
    """Mean of ``-|z| + penalty * (edges inside z)`` over the measured bitstrings."""
    if histogram.n != g.n:
        raise ValueError("histogram register width does not match the graph")
    total = sum(c * (-z.bit_count() + penalty * _conflicts(g, z)) for z, c in histogram.counts.items())
    return total / histogram.shots


@dataclass
class QaoaConfig:
    layers: int = 1
    eval_shots: int = 50
    max_evals: int = 100
    final_shots: int = 100
    penalty: object = "auto"
    c6: float = DEFAULT_C6
    max_amp_mhz: float = 12.0
    max_det_mhz: float = 12.0
    max_duration_us: float = 3.0
    objective: str = "mis_cost"
    # cost-segment detuning as a fraction of the detuning cap
    detuning_fraction: float = 0.5
    # "register": keep the drive on during the cost segment; "zero": detuning only
    cost_drive: str = "register"
    min_duration_us: float = 0.01
    # per-axis points of the coarse duration scan seeding the simplex; 0 starts
    # from (T/4, T/4) directly
    grid_points: int = 6
    # scan extent in Rabi periods of the register drive, capped at T/2
    grid_span_periods: float = 1.0
    # restart the simplex from the incumbent until max_evals is spent
    restarts: bool = True
    rescale: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.layers != 1:
            raise ValueError("only single-layer schedules are supported")
        if self.objective not in ("mis_cost", "ising_energy"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.cost_drive not in ("register", "zero"):
            raise ValueError(f"unknown cost_drive {self.cost_drive!r}")
        for name in ("eval_shots", "max_evals", "final_shots"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be at least 1")

    @property
    def device(self) -> DeviceSpec:
        return DeviceSpec.from_mhz(self.max_amp_mhz, self.max_det_mhz, self.max_duration_us, self.c6)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        return d

    @classmethod
    def from_dict(cls, d: dict | None) -> "QaoaConfig":
        d = dict(d or {})
        known = {k: d.pop(k) for k in list(d) if k in cls.__dataclass_fields__ and k != "extra"}
        return cls(**known, extra=d)


def qaoa_schedule(register: Register, cfg: QaoaConfig, t_mix: float, t_cost: float) -> PulseSchedule:
    """One QAOA layer: resonant mixing segment, then a detuned cost segment."""
    device = cfg.device
    delta = cfg.detuning_fraction * device.max_det
    cost_omega = register.omega if cfg.cost_drive == "register" else 0.0
    return PulseSchedule([(register.omega, 0.0, t_mix), (cost_omega, delta, t_cost)], device)


class QaoaSampler:
    """MIS sampler backed by the emulator with Nelder-Mead-tuned pulse durations."""

    def __init__(self, cfg: QaoaConfig | None = None):
        self.cfg = cfg or QaoaConfig()
        self.name = "qaoa"

    def sample(self, g: Graph, shots: int | None, seed: int) -> SampleHistogram:
        cfg = self.cfg
        device = cfg.device
        final_shots = cfg.final_shots if shots is None else int(shots)
        if final_shots < 1:
            raise ValueError("shots must be at least 1")
        if g.n == 0:
            return SampleHistogram(0, {0: final_shots}, self.name, seed, final_shots)
        register = embed(g, device, rescale=cfg.rescale)
        prop = Propagator(register)
        psi0 = ground_state(g.n)
        if cfg.penalty == "auto":
            penalty = 2.0 * max((row.bit_count() for row in g.adj), default=0)
        else:
            penalty = float(cfg.penalty)
        delta = cfg.detuning_fraction * device.max_det
        diag = hamiltonian_diagonal(register, delta) if cfg.objective == "ising_energy" else None
        t_max = device.max_duration
        t_min = cfg.min_duration_us
        counter = [0]

        def legal(t):
            t = np.clip(np.asarray(t, dtype=float), t_min, t_max)
            if t.sum() > t_max:
                t = t * (t_max / t.sum())
            return t

        def energy(t):
            t = legal(t)
            psi = prop.evolve(psi0, qaoa_schedule(register, cfg, t[0], t[1]))
            h = measure(psi, cfg.eval_shots, derive_seed(seed, 0, counter[0]))
            counter[0] += 1
            if diag is None:
                return qaoa_energy(h, g, penalty)
            return sum(c * diag[z] for z, c in h.counts.items()) / h.shots

        evals = []  # (energy, t1, t2) of every evaluation, in order

        def tracked(t):
            e = energy(t)
            t = legal(t)
            evals.append((e, float(t[0]), float(t[1])))
            return e

        start = np.array([t_max / 4, t_max / 4])
        g_pts = int(cfg.grid_points)
        if g_pts > 0 and g_pts * g_pts < cfg.max_evals:
            # the landscape oscillates on the Rabi period, so the scan covers
            # the first few periods rather than the whole duration window
            span = t_max / 2
            if cfg.grid_span_periods > 0:
                span = min(span, cfg.grid_span_periods * TWO_PI / register.omega)
            axis = np.linspace(t_min, span, g_pts)
            for a in axis:
                for b in axis:
                    tracked((a, b))
            start = np.array(min(evals)[1:])
        while cfg.max_evals - len(evals) >= 3:
            nelder_mead(tracked, start, max_evals=cfg.max_evals - len(evals),
                        bounds=[(t_min, t_max)] * 2)
            if not cfg.restarts:
                break
            # a converged simplex restarts around the best point seen so far
            start = np.array(min(evals)[1:])
        best_e, t1, t2 = min(evals)
        res = OptimizeResult(np.array([t1, t2]), best_e, len(evals))
        t_best = legal(res.x)
        schedule = qaoa_schedule(register, cfg, t_best[0], t_best[1])
        psi = prop.evolve(psi0, schedule)
        h = measure(psi, final_shots, derive_seed(seed, 1))
        h.backend = self.name
        h.shots_consumed = res.nfev * cfg.eval_shots + final_shots
        h.meta = {
            "durations_us": [float(t) for t in t_best],
            "omega": register.omega,
            "r_b": register.r_b,
            "evals": res.nfev,
            "best_energy": res.fun,
            "schedule": schedule.to_list(),
        }
        return h


def qaoa_mis_sampler(g: Graph, shots: int | None, seed: int, cfg: QaoaConfig | None = None) -> SampleHistogram:
    return QaoaSampler(cfg).sample(g, shots, seed)
