"""Bar-tipping maze generation as a QUBO.

Binary variables come in two families sharing one flat index space:

* x(i, j, d): bar (i, j) extends in direction d. The first column (j = 0)
  has four directions, later columns three (no left), so row i contributes
  3N+1 variables and bar variables occupy indices [0, N(3N+1)).
* X(m, n2): candidate (m, n2) is picked as one of the two start/goal cells,
  occupying indices [N(3N+1), N(3N+1) + (N+1)^2).

The cost is a sum of three penalties: +1 per vertically overlapping
extension pair, lambda1 * (sum_d x - 1)^2 per bar, and
lambda2 * (sum X - 2)^2 over the candidates. Penalty constants are kept in
``offset`` so every feasible configuration has energy exactly 0, which gives
an absolute ground-state test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

import numpy as np

from .maze import BarAssignment, DOWN, LEFT, UP

if TYPE_CHECKING:
    from .adaptive import UpdateState

DEFAULT_LAMBDA1 = 2.0
DEFAULT_LAMBDA2 = 2.0


class IndexOutOfRangeError(IndexError):
    """Variable coordinates outside the problem's index space."""


class LengthMismatchError(ValueError):
    """Bitstring length does not match the problem dimension."""


class DimMismatchError(ValueError):
    """Update matrix dimension does not match the problem dimension."""


def num_bar_vars(n: int) -> int:
    return n * (3 * n + 1)


def num_sg_vars(n: int) -> int:
    return (n + 1) ** 2


def problem_dim(n: int) -> int:
    return num_bar_vars(n) + num_sg_vars(n)


def index_of_bar(n: int, i: int, j: int, d: int) -> int:
    """Flat index of x(i, j, d): d + (3N+1)i for j=0, d + 3j + 1 + (3N+1)i else."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRangeError(f"bar ({i},{j}) outside [0,{n})^2")
    if d not in (0, 1, 2, 3) or (d == LEFT and j != 0):
        raise IndexOutOfRangeError(f"direction {d} not allowed at column {j}")
    if j == 0:
        return d + (3 * n + 1) * i
    return d + 3 * j + 1 + (3 * n + 1) * i


def bar_of_index(n: int, k: int) -> tuple[int, int, int]:
    """Inverse of index_of_bar."""
    if not (0 <= k < num_bar_vars(n)):
        raise IndexOutOfRangeError(f"index {k} outside bar range")
    i, rem = divmod(k, 3 * n + 1)
    if rem < 4:
        return i, 0, rem
    j, d = divmod(rem - 4, 3)
    return i, j + 1, d


def index_of_sg(n: int, m: int, n2: int) -> int:
    """Flat index of X(m, n2): (3N+1)N + (N+1)m + n2."""
    if not (0 <= m <= n and 0 <= n2 <= n):
        raise IndexOutOfRangeError(f"candidate ({m},{n2}) outside [0,{n}]^2")
    return num_bar_vars(n) + (n + 1) * m + n2


def sg_of_index(n: int, k: int) -> tuple[int, int]:
    """Inverse of index_of_sg."""
    if not (num_bar_vars(n) <= k < problem_dim(n)):
        raise IndexOutOfRangeError(f"index {k} outside start/goal range")
    m, n2 = divmod(k - num_bar_vars(n), n + 1)
    return m, n2


@dataclass
class QuboProblem:
    """Upper-triangular sparse QUBO over the flat index space.

    ``coeffs`` maps (k1, k2) with k1 <= k2 to a weight; ``offset`` holds the
    constant part of the penalty expansions. The coefficient map is treated
    as immutable once the problem is evaluated.
    """

    n: int
    dim: int
    coeffs: dict
    offset: float
    lambda1: float
    lambda2: float
    _packed: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def packed(self) -> tuple:
        """(k1s, k2s, values) arrays over the stored coefficients."""
        if self._packed is None:
            if self.coeffs:
                k1s = np.fromiter((k for k, _ in self.coeffs), dtype=np.int64, count=len(self.coeffs))
                k2s = np.fromiter((k for _, k in self.coeffs), dtype=np.int64, count=len(self.coeffs))
                vals = np.fromiter(self.coeffs.values(), dtype=np.float64, count=len(self.coeffs))
            else:
                k1s = k2s = np.zeros(0, dtype=np.int64)
                vals = np.zeros(0)
            self._packed = (k1s, k2s, vals)
        return self._packed

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """(diag, couplings) with couplings symmetric and zero-diagonal."""
        diag = np.zeros(self.dim)
        w = np.zeros((self.dim, self.dim))
        k1s, k2s, vals = self.packed()
        on_diag = k1s == k2s
        np.add.at(diag, k1s[on_diag], vals[on_diag])
        np.add.at(w, (k1s[~on_diag], k2s[~on_diag]), vals[~on_diag])
        np.add.at(w, (k2s[~on_diag], k1s[~on_diag]), vals[~on_diag])
        return diag, w


def build_base_qubo(
    n: int, lambda1: float = DEFAULT_LAMBDA1, lambda2: float = DEFAULT_LAMBDA2
) -> QuboProblem:
    """Cost matrix for the three bar-tipping penalties at bar-grid size n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("penalty weights must be positive")

    coeffs: dict = {}
    offset = 0.0

    def add(k1: int, k2: int, c: float) -> None:
        key = (k1, k2) if k1 <= k2 else (k2, k1)
        coeffs[key] = coeffs.get(key, 0.0) + c

    # Vertical overlap: bar (i, j) down meets bar (i+1, j) up.
    for j in range(n):
        for i in range(n - 1):
            add(index_of_bar(n, i, j, DOWN), index_of_bar(n, i + 1, j, UP), 1.0)

    # One direction per bar: lambda1 * (sum_d x - 1)^2.
    for i in range(n):
        for j in range(n):
            ks = [index_of_bar(n, i, j, d) for d in (range(4) if j == 0 else range(3))]
            for a, ka in enumerate(ks):
                add(ka, ka, -lambda1)
                for kb in ks[a + 1 :]:
                    add(ka, kb, 2.0 * lambda1)
            offset += lambda1

    # Exactly two start/goal picks: lambda2 * (sum X - 2)^2.
    sg = [index_of_sg(n, m, n2) for m in range(n + 1) for n2 in range(n + 1)]
    for a, ka in enumerate(sg):
        add(ka, ka, -3.0 * lambda2)
        for kb in sg[a + 1 :]:
            add(ka, kb, 2.0 * lambda2)
    offset += 4.0 * lambda2

    return QuboProblem(
        n=n, dim=problem_dim(n), coeffs=coeffs, offset=offset, lambda1=lambda1, lambda2=lambda2
    )


def _as_bits(q: QuboProblem, bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != q.dim:
        raise LengthMismatchError(f"expected {q.dim} bits, got shape {arr.shape}")
    return arr


def energy(q: QuboProblem, bits) -> float:
    """Cost of a configuration, offset included (feasible => exactly 0)."""
    b = _as_bits(q, bits)
    k1s, k2s, vals = q.packed()
    active = (b[k1s] != 0) & (b[k2s] != 0)
    return float(q.offset + vals[active].sum())


def decode(q: QuboProblem, bits) -> Union[BarAssignment, list]:
    """Read a configuration back into a BarAssignment.

    Returns the assignment when all three bar constraints hold and exactly
    two candidates are picked; otherwise returns the list of violations
    (strings naming each broken constraint with coordinates).
    """
    b = _as_bits(q, bits)
    n = q.n
    violations = []
    dirs = {}
    for i in range(n):
        for j in range(n):
            chosen = [d for d in (range(4) if j == 0 else range(3)) if b[index_of_bar(n, i, j, d)]]
            if len(chosen) != 1:
                violations.append(f"bar ({i},{j}) has {len(chosen)} directions set")
            else:
                dirs[(i, j)] = chosen[0]
    for j in range(n):
        for i in range(n - 1):
            if b[index_of_bar(n, i, j, DOWN)] and b[index_of_bar(n, i + 1, j, UP)]:
                violations.append(f"overlap between bars ({i},{j}) and ({i + 1},{j})")
    picked = [sg_of_index(n, k) for k in range(num_bar_vars(n), q.dim) if b[k]]
    if len(picked) != 2:
        violations.append(f"start/goal count = {len(picked)}")
    if violations:
        return violations
    return BarAssignment(n=n, dirs=dirs, start_goal=frozenset(picked))


def encode_assignment(q: QuboProblem, a: BarAssignment) -> np.ndarray:
    """Bit vector with exactly the assignment's variables set."""
    bits = np.zeros(q.dim, dtype=np.int64)
    for (i, j), d in a.dirs.items():
        bits[index_of_bar(q.n, i, j, d)] = 1
    for m, n2 in a.start_goal:
        bits[index_of_sg(q.n, m, n2)] = 1
    return bits


def apply_update_term(q: QuboProblem, u: "UpdateState") -> QuboProblem:
    """Add the difficulty-update matrix to a copy of the base problem.

    The dense update matrix is partitioned at the bar/candidate boundary:
    bar-bar, bar-candidate and candidate-bar entries are scaled by
    lambda_update1, candidate-candidate entries by lambda_update2. The two
    ordered off-diagonal entries fold into the single stored upper-triangular
    coupling. The input problem is left untouched.
    """
    if u.dim != q.dim:
        raise DimMismatchError(f"update dim {u.dim} != problem dim {q.dim}")
    split = num_bar_vars(q.n)
    m = np.asarray(u.matrix, dtype=float)

    folded = m + m.T
    np.fill_diagonal(folded, np.diag(m))
    weights = np.full((q.dim, q.dim), u.lambda_update1)
    weights[split:, split:] = u.lambda_update2
    delta = weights * folded

    k1s, k2s = np.triu_indices(q.dim)
    vals = delta[k1s, k2s]
    nz = vals != 0.0
    coeffs = dict(q.coeffs)
    for k1, k2, v in zip(k1s[nz].tolist(), k2s[nz].tolist(), vals[nz].tolist()):
        key = (k1, k2)
        coeffs[key] = coeffs.get(key, 0.0) + v

    return QuboProblem(
        n=q.n, dim=q.dim, coeffs=coeffs, offset=q.offset, lambda1=q.lambda1, lambda2=q.lambda2
    )


def export_coo(q: QuboProblem) -> str:
    """COO text: header line 'n dim offset', then one 'k1 k2 weight' per line."""
    lines = [f"{q.n} {q.dim} {q.offset!r}"]
    for (k1, k2) in sorted(q.coeffs):
        lines.append(f"{k1} {k2} {q.coeffs[(k1, k2)]!r}")
    return "\n".join(lines) + "\n"


def import_coo(text: str) -> QuboProblem:
    """Inverse of export_coo; penalty weights are not part of the format."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    n, dim, offset = int(head[0]), int(head[1]), float(head[2])
    coeffs = {}
    for ln in lines[1:]:
        parts = ln.split()
        k1, k2 = int(parts[0]), int(parts[1])
        if not (0 <= k1 <= k2 < dim):
            raise ValueError(f"bad index pair {k1},{k2}")
        coeffs[(k1, k2)] = float(parts[2])
    return QuboProblem(
        n=n, dim=dim, coeffs=coeffs, offset=offset, lambda1=float("nan"), lambda2=float("nan")
    )
