"""In-process annealers: simulated annealing and simulated quantum annealing.

Both samplers perform single-spin Metropolis updates with O(1) rejected
moves via cached local fields; the hot loops are numba-compiled. A read is
an independent restart from a random configuration; reads are seeded from a
spawned seed sequence so results are deterministic given the seed and
independent of any execution order.

The SQA sampler is a path-integral Monte Carlo over Trotter replicas of the
classical configuration. Replicas are coupled ferromagnetically with
strength ln(coth(beta * gamma / P)) / (2 beta), with the transverse field
gamma decreasing over the sweep schedule; gamma = 0 means no coupling at
all, i.e. independent replicas.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .maze import BarAssignment
from .qubo import QuboProblem, decode, energy


class NoFeasibleSampleError(RuntimeError):
    """No record in the sample set decodes to a feasible assignment."""


@dataclass
class BetaSchedule:
    beta_min: float = 0.1
    beta_max: float = 10.0
    interpolation: str = "geometric"

    def values(self, sweeps: int) -> np.ndarray:
        if self.interpolation == "geometric":
            return np.geomspace(self.beta_min, self.beta_max, sweeps)
        if self.interpolation == "linear":
            return np.linspace(self.beta_min, self.beta_max, sweeps)
        raise ValueError(f"unknown interpolation {self.interpolation!r}")


@dataclass
class GammaSchedule:
    """Transverse field, decreased linearly from gamma_max to gamma_min."""

    gamma_max: float = 3.0
    gamma_min: float = 0.01

    def values(self, sweeps: int) -> np.ndarray:
        return np.linspace(self.gamma_max, self.gamma_min, sweeps)


@dataclass
class AnnealParams:
    sweeps: int = 1000
    reads: int = 100
    seed: int | None = None
    beta: BetaSchedule = field(default_factory=BetaSchedule)
    trotter_slices: int = 8
    gamma: GammaSchedule = field(default_factory=GammaSchedule)

    def validate(self, quantum: bool = False) -> None:
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.reads < 1:
            raise ValueError("reads must be >= 1")
        if not self.beta.beta_min < self.beta.beta_max:
            raise ValueError("beta_min must be < beta_max")
        if quantum and self.trotter_slices < 2:
            raise ValueError("trotter_slices must be >= 2")


@dataclass
class SampleRecord:
    bits: tuple
    energy: float
    occurrences: int


@dataclass
class SampleSet:
    records: list
    per_read_time: float
    total_time: float

    def to_json(self) -> dict:
        return {
            "records": [
                {
                    "bitstring": "".join(str(b) for b in rec.bits),
                    "energy": rec.energy,
                    "occurrences": rec.occurrences,
                }
                for rec in self.records
            ],
            "per_read_time_s": self.per_read_time,
            "total_time_s": self.total_time,
        }


@numba.njit(cache=True)
def _sa_read(diag, w, bits, betas, uniforms):
    dim = bits.shape[0]
    local = diag.copy()
    for k in range(dim):
        for j in range(dim):
            if bits[j]:
                local[k] += w[k, j]
    for s in range(betas.shape[0]):
        beta = betas[s]
        for k in range(dim):
            de = local[k] if bits[k] == 0 else -local[k]
            if de <= 0.0 or uniforms[s, k] < np.exp(-beta * de):
                if bits[k] == 0:
                    bits[k] = 1
                    for j in range(dim):
                        local[j] += w[j, k]
                else:
                    bits[k] = 0
                    for j in range(dim):
                        local[j] -= w[j, k]


@numba.njit(cache=True)
def _sqa_read(diag, w, bits, beta, jperps, uniforms):
    slices, dim = bits.shape
    local = np.empty((slices, dim))
    for p in range(slices):
        for k in range(dim):
            acc = diag[k]
            for j in range(dim):
                if bits[p, j]:
                    acc += w[k, j]
            local[p, k] = acc
    inv_p = 1.0 / slices
    for s in range(jperps.shape[0]):
        jp = jperps[s]
        for p in range(slices):
            up = (p - 1) % slices
            dn = (p + 1) % slices
            for k in range(dim):
                b = bits[p, k]
                de_cl = local[p, k] if b == 0 else -local[p, k]
                spin = 2.0 * b - 1.0
                neigh = (2.0 * bits[up, k] - 1.0) + (2.0 * bits[dn, k] - 1.0)
                de = de_cl * inv_p + 2.0 * jp * spin * neigh
                if de <= 0.0 or uniforms[s, p, k] < np.exp(-beta * de):
                    if b == 0:
                        bits[p, k] = 1
                        for j in range(dim):
                            local[p, j] += w[j, k]
                    else:
                        bits[p, k] = 0
                        for j in range(dim):
                            local[p, j] -= w[j, k]


def transverse_coupling(beta: float, gamma: float, slices: int) -> float:
    """Inter-replica coupling strength; zero field means zero coupling."""
    if gamma <= 0.0:
        return 0.0
    x = beta * gamma / slices
    t = math.tanh(x)
    if t >= 1.0:
        return 0.0
    return 0.5 / beta * math.log(1.0 / t)


def _aggregate(q: QuboProblem, raw_reads: list, total_time: float, reads: int) -> SampleSet:
    counts: dict = {}
    for bits in raw_reads:
        key = bits.tobytes()
        if key in counts:
            counts[key][1] += 1
        else:
            counts[key] = [bits, 1]
    records = [
        SampleRecord(bits=tuple(int(b) for b in bits), energy=energy(q, bits), occurrences=cnt)
        for bits, cnt in counts.values()
    ]
    return SampleSet(records=records, per_read_time=total_time / reads, total_time=total_time)


def sample_sa(q: QuboProblem, p: AnnealParams) -> SampleSet:
    """Independent-restart simulated annealing under the beta schedule."""
    p.validate()
    diag, w = q.dense()
    betas = p.beta.values(p.sweeps)
    seeds = np.random.SeedSequence(p.seed).spawn(p.reads)
    raw = []
    t0 = time.perf_counter()
    for child in seeds:
        rng = np.random.default_rng(child)
        bits = rng.integers(0, 2, q.dim, dtype=np.int8)
        uniforms = rng.random((p.sweeps, q.dim))
        _sa_read(diag, w, bits, betas, uniforms)
        raw.append(bits)
    total = time.perf_counter() - t0
    return _aggregate(q, raw, total, p.reads)


def sample_sqa(q: QuboProblem, p: AnnealParams) -> SampleSet:
    """Path-integral Monte Carlo; each read keeps its best replica."""
    p.validate(quantum=True)
    diag, w = q.dense()
    beta = p.beta.beta_max
    jperps = np.array(
        [transverse_coupling(beta, g, p.trotter_slices) for g in p.gamma.values(p.sweeps)]
    )
    seeds = np.random.SeedSequence(p.seed).spawn(p.reads)
    raw = []
    t0 = time.perf_counter()
    for child in seeds:
        rng = np.random.default_rng(child)
        bits = rng.integers(0, 2, (p.trotter_slices, q.dim), dtype=np.int8)
        uniforms = rng.random((p.sweeps, p.trotter_slices, q.dim))
        _sqa_read(diag, w, bits, beta, jperps, uniforms)
        best = min(range(p.trotter_slices), key=lambda i: energy(q, bits[i]))
        raw.append(bits[best].copy())
    total = time.perf_counter() - t0
    return _aggregate(q, raw, total, p.reads)


def best_feasible(s: SampleSet, q: QuboProblem) -> BarAssignment:
    """Lowest-energy record that decodes; first-seen order breaks ties."""
    best = None
    best_energy = math.inf
    for rec in s.records:
        result = decode(q, rec.bits)
        if isinstance(result, BarAssignment) and rec.energy < best_energy:
            best = result
            best_energy = rec.energy
    if best is None:
        raise NoFeasibleSampleError("no sampled configuration satisfies the constraints")
    return best
