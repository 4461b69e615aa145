"""Time-to-solution and scaling analysis for the maze generators.

TTS follows the standard definition: the expected anneal time to reach the
ground state at least once with the target confidence,

    tts = t_anneal * ln(1 - target) / ln(1 - p_success),

collapsing to a single read when p_success already meets the target.
Success proportions get Wilson 95% intervals; polynomial fits get Student-t
intervals on each coefficient.
"""

from __future__ import annotations

import io
import csv
import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import maze as maze_mod
from .qubo import build_base_qubo
from .samplers import AnnealParams, SampleSet, sample_sa, sample_sqa

Z95 = 1.959963984540054

CLASSIC_GENERATORS = {
    "classic-bar": maze_mod.generate_bar_tipping,
    "classic-wall": maze_mod.generate_wall_extending,
    "classic-hunt": maze_mod.generate_hunt_and_kill,
}
SAMPLER_SOLVERS = ("sa", "sqa")
KNOWN_SOLVERS = tuple(CLASSIC_GENERATORS) + SAMPLER_SOLVERS

CSV_HEADER = "solver,n,reps,mean_seconds,ci_low,ci_high,p_success,tts_seconds"


class UndefinedTtsError(ValueError):
    """TTS is undefined because the success probability is zero."""


class SingularFitError(ValueError):
    """The design matrix is rank-deficient or has too few points."""


class TooShortError(ValueError):
    """Fewer observations than the moving-average window."""


@dataclass
class TtsEstimate:
    t_anneal: float
    p_success: float
    target: float
    tts: float
    ci95: tuple | None


@dataclass
class CoefficientEstimate:
    value: float
    stderr: float
    ci95: tuple


@dataclass
class RegressionFit:
    degree: int
    coefficients: list  # CoefficientEstimate, ascending power
    residual_variance: float
    dof: int

    def t_statistic(self, power: int) -> float:
        c = self.coefficients[power]
        if c.stderr == 0.0:
            return math.inf if c.value != 0 else 0.0
        return c.value / c.stderr

    def predict(self, x: float) -> float:
        return sum(c.value * x**k for k, c in enumerate(self.coefficients))


def wilson_interval(successes: int, total: int, z: float = Z95) -> tuple:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        raise ValueError("total must be positive")
    phat = successes / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def estimate_success_prob(s: SampleSet, ground_energy: float, tol: float = 1e-9) -> tuple:
    """Fraction of reads at or below the ground energy, with Wilson 95% CI."""
    total = sum(rec.occurrences for rec in s.records)
    successes = sum(rec.occurrences for rec in s.records if rec.energy <= ground_energy + tol)
    return successes / total, wilson_interval(successes, total)


def tts(
    t_anneal: float, p_success: float, target: float = 0.99, p_ci: tuple | None = None
) -> TtsEstimate:
    """Expected total anneal time to hit the ground state at the target confidence."""
    if not 0.0 < p_success <= 1.0:
        if p_success == 0.0:
            raise UndefinedTtsError("p_success = 0: ground state never observed")
        raise ValueError("p_success must be in (0, 1]")
    if not 0.0 < target < 1.0:
        raise ValueError("target must be in (0, 1)")

    def seconds(p: float) -> float:
        if p <= 0.0:
            return math.inf
        if p >= target:
            return t_anneal
        return t_anneal * math.log(1.0 - target) / math.log(1.0 - p)

    ci = None
    if p_ci is not None:
        lo_p, hi_p = p_ci
        ci = (seconds(hi_p), seconds(lo_p))
    return TtsEstimate(
        t_anneal=t_anneal, p_success=p_success, target=target, tts=seconds(p_success), ci95=ci
    )


def fit_poly(xs, ys, degree: int) -> RegressionFit:
    """Ordinary least squares on the monomial basis 1, x, ..., x^degree."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d and the same length")
    n_coef = degree + 1
    if x.shape[0] < n_coef + 1:
        raise SingularFitError(f"need more than {n_coef} points for degree {degree}")
    design = np.vander(x, n_coef, increasing=True)
    if np.linalg.matrix_rank(design) < n_coef:
        raise SingularFitError("degenerate x values: design matrix is rank-deficient")
    xtx = design.T @ design
    beta = np.linalg.solve(xtx, design.T @ y)
    resid = y - design @ beta
    dof = x.shape[0] - n_coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(xtx)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    tcrit = float(stats.t.ppf(0.975, dof))
    coeffs = [
        CoefficientEstimate(
            value=float(b), stderr=float(s), ci95=(float(b - tcrit * s), float(b + tcrit * s))
        )
        for b, s in zip(beta, se)
    ]
    return RegressionFit(degree=degree, coefficients=coeffs, residual_variance=s2, dof=dof)


def fit_to_json(fit: RegressionFit) -> dict:
    return {
        "degree": fit.degree,
        "coefficients": [
            {"power": k, "value": c.value, "stderr": c.stderr, "ci95": list(c.ci95)}
            for k, c in enumerate(fit.coefficients)
        ],
        "residual_variance": fit.residual_variance,
        "dof": fit.dof,
    }


def sma_increase_rate(times, window: int = 10) -> list:
    """Moving-average solve times normalized by the first window's average."""
    values = [float(t) for t in times]
    if len(values) < window:
        raise TooShortError(f"need at least {window} times, got {len(values)}")
    smas = [sum(values[i : i + window]) / window for i in range(len(values) - window + 1)]
    first = smas[0]
    return [s / first for s in smas]


@dataclass
class BenchConfig:
    solvers: list
    sizes: list
    reps: int = 5
    seed: int | None = None
    sweeps: int = 1000
    reads: int = 100
    lambda1: float = 2.0
    lambda2: float = 2.0
    target: float = 0.99

    def validate(self) -> None:
        if not self.solvers:
            raise ValueError("no solvers given")
        for s in self.solvers:
            if s not in KNOWN_SOLVERS:
                raise ValueError(f"unknown solver {s!r}; expected one of {KNOWN_SOLVERS}")
        if not self.sizes:
            raise ValueError("empty size range")
        if any(n < 1 for n in self.sizes):
            raise ValueError("sizes must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")


@dataclass
class BenchRow:
    solver: str
    n: int
    reps: int
    mean_seconds: float
    ci_low: float
    ci_high: float
    p_success: float | None
    tts_seconds: float | None


def _mean_ci(samples) -> tuple:
    m = float(np.mean(samples))
    if len(samples) < 2:
        return m, m, m
    sem = float(np.std(samples, ddof=1)) / math.sqrt(len(samples))
    tcrit = float(stats.t.ppf(0.975, len(samples) - 1))
    return m, m - tcrit * sem, m + tcrit * sem


def run_scaling_bench(config: BenchConfig) -> list:
    """Wall-time (and, for samplers, TTS) table over (solver, size) cells."""
    config.validate()
    root = np.random.SeedSequence(config.seed)
    rows = []
    for solver in config.solvers:
        for n in config.sizes:
            seeds = root.spawn(config.reps)
            times = []
            p_success = None
            tts_seconds = None
            if solver in CLASSIC_GENERATORS:
                gen = CLASSIC_GENERATORS[solver]
                for child in seeds:
                    t0 = time.perf_counter()
                    gen(n, seed=child)
                    times.append(time.perf_counter() - t0)
            else:
                q = build_base_qubo(n, config.lambda1, config.lambda2)
                sample = sample_sa if solver == "sa" else sample_sqa
                successes = 0
                total_reads = 0
                per_read = []
                for child in seeds:
                    params = AnnealParams(
                        sweeps=config.sweeps,
                        reads=config.reads,
                        seed=int(np.random.default_rng(child).integers(2**63)),
                    )
                    t0 = time.perf_counter()
                    ss = sample(q, params)
                    times.append(time.perf_counter() - t0)
                    per_read.append(ss.per_read_time)
                    total_reads += config.reads
                    successes += sum(
                        rec.occurrences for rec in ss.records if rec.energy <= 1e-9
                    )
                p_success = successes / total_reads
                if p_success > 0.0:
                    tts_seconds = tts(
                        float(np.mean(per_read)), p_success, target=config.target
                    ).tts
            mean, lo, hi = _mean_ci(times)
            rows.append(
                BenchRow(
                    solver=solver,
                    n=n,
                    reps=config.reps,
                    mean_seconds=mean,
                    ci_low=lo,
                    ci_high=hi,
                    p_success=p_success,
                    tts_seconds=tts_seconds,
                )
            )
    return rows


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for r in rows:
        writer.writerow(
            [
                r.solver,
                r.n,
                r.reps,
                repr(r.mean_seconds),
                repr(r.ci_low),
                repr(r.ci_high),
                "" if r.p_success is None else repr(r.p_success),
                "" if r.tts_seconds is None else repr(r.tts_seconds),
            ]
        )
    return out.getvalue()


def rows_from_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER.split(","):
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        rows.append(
            BenchRow(
                solver=rec[0],
                n=int(rec[1]),
                reps=int(rec[2]),
                mean_seconds=float(rec[3]),
                ci_low=float(rec[4]),
                ci_high=float(rec[5]),
                p_success=None if rec[6] == "" else float(rec[6]),
                tts_seconds=None if rec[7] == "" else float(rec[7]),
            )
        )
    return rows
