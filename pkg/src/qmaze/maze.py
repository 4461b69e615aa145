"""Grid mazes: classical generators, perfect-maze validation, solving, rendering.

All mazes live on a square grid of side 2N+3 where N is the bar-grid size:
the outermost ring is wall, the N*N "bars" sit at even-even interior cells
(2i+2, 2j+2), and the (N+1)^2 start/goal candidates sit at odd-odd cells
(2m+1, 2n+1).

Three classical generators are provided (bar tipping, wall extending,
hunt and kill), all emitting the same Maze contract so they can be compared
against the annealing route on equal footing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

UP, RIGHT, DOWN, LEFT = 0, 1, 2, 3
DIR_OFFSETS = ((-1, 0), (0, 1), (1, 0), (0, -1))
DIR_NAMES = ("up", "right", "down", "left")

WALL_CHAR = "#"
PATH_CHAR = "."
START_CHAR = "S"
GOAL_CHAR = "G"


class InvalidAssignmentError(ValueError):
    """A bar assignment violates one of the bar-tipping constraints."""


class NoPathError(RuntimeError):
    """No path exists between start and goal."""


def grid_side(n: int) -> int:
    return 2 * n + 3


@dataclass(eq=False)
class Maze:
    """A rectangular maze: wall grid plus start and goal cells.

    ``grid`` is a (2n+3, 2n+3) boolean array, True where the cell is wall.
    Start and goal are (row, col) path cells at odd-odd coordinates.
    """

    n: int
    grid: np.ndarray
    start: tuple[int, int]
    goal: tuple[int, int]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Maze):
            return NotImplemented
        return (
            self.n == other.n
            and self.start == other.start
            and self.goal == other.goal
            and np.array_equal(self.grid, other.grid)
        )

    @property
    def side(self) -> int:
        return self.grid.shape[0]

    def is_wall(self, r: int, c: int) -> bool:
        return bool(self.grid[r, c])

    def to_json(self) -> dict:
        rows = ["".join(WALL_CHAR if w else PATH_CHAR for w in row) for row in self.grid]
        return {
            "n": self.n,
            "grid": rows,
            "start": [self.start[0], self.start[1]],
            "goal": [self.goal[0], self.goal[1]],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Maze":
        rows = obj["grid"]
        grid = np.array([[ch == WALL_CHAR for ch in row] for row in rows], dtype=bool)
        return cls(
            n=int(obj["n"]),
            grid=grid,
            start=(int(obj["start"][0]), int(obj["start"][1])),
            goal=(int(obj["goal"][0]), int(obj["goal"][1])),
        )


@dataclass
class BarAssignment:
    """Extension direction per bar plus the two chosen start/goal candidates.

    ``dirs`` maps bar coordinates (i, j), i,j in [0, n), to a direction in
    {0: up, 1: right, 2: down, 3: left}. ``start_goal`` holds exactly two
    candidate coordinates (m, n2) with m, n2 in [0, n].
    """

    n: int
    dirs: dict
    start_goal: frozenset

    def violations(self) -> list[str]:
        """Constraint violations of this assignment, empty when feasible."""
        out = []
        n = self.n
        for i in range(n):
            for j in range(n):
                if (i, j) not in self.dirs:
                    out.append(f"bar ({i},{j}) has no direction")
        for (i, j), d in self.dirs.items():
            if not (0 <= i < n and 0 <= j < n):
                out.append(f"bar ({i},{j}) out of range")
            elif d not in (UP, RIGHT, DOWN, LEFT):
                out.append(f"bar ({i},{j}) has invalid direction {d}")
            elif d == LEFT and j != 0:
                out.append(f"bar ({i},{j}) extends left outside the first column")
        for (i, j), d in sorted(self.dirs.items()):
            if d == DOWN and self.dirs.get((i + 1, j)) == UP:
                out.append(f"bars ({i},{j}) down and ({i + 1},{j}) up overlap")
        if len(self.start_goal) != 2:
            out.append(f"start/goal count = {len(self.start_goal)}")
        for (m, n2) in self.start_goal:
            if not (0 <= m <= n and 0 <= n2 <= n):
                out.append(f"start/goal candidate ({m},{n2}) out of range")
        return out


@dataclass
class ValidationReport:
    is_perfect: bool
    path_cell_count: int
    connected: bool
    edge_count: int
    violations: list


def _empty_bar_grid(n: int) -> np.ndarray:
    """Outer wall ring plus the N*N standing bars, everything else path."""
    side = grid_side(n)
    grid = np.zeros((side, side), dtype=bool)
    grid[0, :] = grid[-1, :] = grid[:, 0] = grid[:, -1] = True
    for i in range(n):
        for j in range(n):
            grid[2 * i + 2, 2 * j + 2] = True
    return grid


def _candidate_cells(n: int) -> list[tuple[int, int]]:
    return [(2 * m + 1, 2 * n2 + 1) for m in range(n + 1) for n2 in range(n + 1)]


def _pick_start_goal(n: int, rng: np.random.Generator) -> tuple[tuple[int, int], tuple[int, int]]:
    """Two distinct odd-odd candidates, uniformly, then labeled at random."""
    cells = _candidate_cells(n)
    a, b = rng.choice(len(cells), size=2, replace=False)
    first, second = cells[int(a)], cells[int(b)]
    if rng.integers(2) == 1:
        first, second = second, first
    return first, second


def generate_bar_tipping(n: int, seed=None) -> Maze:
    """Classical bar tipping: extend each bar one cell in a legal direction.

    Columns are processed left to right; within a column top to bottom. The
    first column may extend in all four directions, later columns only up,
    right or down. A blocked direction (target cell already wall) is
    rejection-resampled among the remaining legal ones; "right" can never be
    blocked, so a legal choice always exists.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    grid = _empty_bar_grid(n)
    for j in range(n):
        allowed = (UP, RIGHT, DOWN, LEFT) if j == 0 else (UP, RIGHT, DOWN)
        for i in range(n):
            r, c = 2 * i + 2, 2 * j + 2
            legal = [d for d in allowed if not grid[r + DIR_OFFSETS[d][0], c + DIR_OFFSETS[d][1]]]
            d = legal[int(rng.integers(len(legal)))]
            grid[r + DIR_OFFSETS[d][0], c + DIR_OFFSETS[d][1]] = True
    start, goal = _pick_start_goal(n, rng)
    return Maze(n=n, grid=grid, start=start, goal=goal)


def generate_wall_extending(n: int, seed=None) -> Maze:
    """Wall extending on the same (2N+3)^2 grid.

    Starts from an open field inside the outer ring. Walls grow two cells at
    a time from even-even lattice points until every such point is wall. An
    extension in progress never runs into itself; it commits when it reaches
    a previously built wall (including the ring).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    side = grid_side(n)
    grid = np.zeros((side, side), dtype=bool)
    grid[0, :] = grid[-1, :] = grid[:, 0] = grid[:, -1] = True

    starts = [(r, c) for r in range(2, side - 1, 2) for c in range(2, side - 1, 2)]

    def extend_from(origin: tuple[int, int]) -> None:
        # Cells of the wall being built this round; committed on connect.
        current: set[tuple[int, int]] = {origin}
        pos = origin
        while True:
            dirs = list(range(4))
            rng.shuffle(dirs)
            chosen = None
            for d in dirs:
                dr, dc = DIR_OFFSETS[d]
                two = (pos[0] + 2 * dr, pos[1] + 2 * dc)
                if two not in current:
                    chosen = d
                    break
            if chosen is None:
                # Walled itself in; continue from another lattice point of
                # the in-progress wall (one with a free direction exists).
                lattice = [p for p in current if p[0] % 2 == 0 and p[1] % 2 == 0]
                pos = lattice[int(rng.integers(len(lattice)))]
                continue
            dr, dc = DIR_OFFSETS[chosen]
            mid = (pos[0] + dr, pos[1] + dc)
            two = (pos[0] + 2 * dr, pos[1] + 2 * dc)
            current.add(mid)
            if grid[two]:
                for p in current:
                    grid[p] = True
                return
            current.add(two)
            pos = two

    while True:
        open_starts = [p for p in starts if not grid[p]]
        if not open_starts:
            break
        extend_from(open_starts[int(rng.integers(len(open_starts)))])

    start, goal = _pick_start_goal(n, rng)
    return Maze(n=n, grid=grid, start=start, goal=goal)


def generate_hunt_and_kill(n: int, seed=None) -> Maze:
    """Hunt and kill: carve paths out of a fully walled grid.

    Odd-odd cells are the carving lattice. A random walk carves into
    not-yet-visited lattice cells; when stuck, it restarts from a random
    already-carved cell that still has an unvisited neighbor, until every
    lattice cell is path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    side = grid_side(n)
    grid = np.ones((side, side), dtype=bool)

    lattice = _candidate_cells(n)
    unvisited = set(lattice)

    def free_neighbors(cell):
        out = []
        for dr, dc in DIR_OFFSETS:
            nb = (cell[0] + 2 * dr, cell[1] + 2 * dc)
            if nb in unvisited:
                out.append(nb)
        return out

    pos = lattice[int(rng.integers(len(lattice)))]
    grid[pos] = False
    unvisited.discard(pos)
    carved = [pos]
    while unvisited:
        options = free_neighbors(pos)
        if not options:
            hunts = [c for c in carved if free_neighbors(c)]
            pos = hunts[int(rng.integers(len(hunts)))]
            continue
        nxt = options[int(rng.integers(len(options)))]
        mid = ((pos[0] + nxt[0]) // 2, (pos[1] + nxt[1]) // 2)
        grid[mid] = False
        grid[nxt] = False
        unvisited.discard(nxt)
        carved.append(nxt)
        pos = nxt

    start, goal = _pick_start_goal(n, rng)
    return Maze(n=n, grid=grid, start=start, goal=goal)


def assignment_to_maze(a: BarAssignment, seed=None) -> Maze:
    """Decode a feasible bar assignment into a Maze.

    Bar (i, j) occupies cell (2i+2, 2j+2); its extension fills the adjacent
    cell in the assigned direction. Which of the two chosen candidates
    becomes the start is decided by the seeded RNG.
    """
    problems = a.violations()
    if problems:
        raise InvalidAssignmentError("; ".join(problems))
    rng = np.random.default_rng(seed)
    grid = _empty_bar_grid(a.n)
    for (i, j), d in a.dirs.items():
        r, c = 2 * i + 2, 2 * j + 2
        dr, dc = DIR_OFFSETS[d]
        grid[r + dr, c + dc] = True
    pair = sorted(a.start_goal)
    cells = [(2 * m + 1, 2 * n2 + 1) for m, n2 in pair]
    if rng.integers(2) == 1:
        cells.reverse()
    return Maze(n=a.n, grid=grid, start=cells[0], goal=cells[1])


def validate_perfect(m: Maze) -> ValidationReport:
    """Check the spanning-tree property: connected path cells, E = P - 1.

    Also checks that start and goal are distinct odd-odd path cells.
    Defects are reported in ``violations`` rather than raised.
    """
    side = m.side
    path_cells = [(r, c) for r in range(side) for c in range(side) if not m.grid[r, c]]
    path_count = len(path_cells)

    edge_count = 0
    for r, c in path_cells:
        if r + 1 < side and not m.grid[r + 1, c]:
            edge_count += 1
        if c + 1 < side and not m.grid[r, c + 1]:
            edge_count += 1

    components = 0
    seen = np.zeros((side, side), dtype=bool)
    for cell in path_cells:
        if seen[cell]:
            continue
        components += 1
        queue = deque([cell])
        seen[cell] = True
        while queue:
            r, c = queue.popleft()
            for dr, dc in DIR_OFFSETS:
                nr, nc = r + dr, c + dc
                if 0 <= nr < side and 0 <= nc < side and not m.grid[nr, nc] and not seen[nr, nc]:
                    seen[nr, nc] = True
                    queue.append((nr, nc))

    connected = components <= 1 and path_count > 0
    violations = []
    if not connected:
        violations.append(f"disconnected: {components} path components")
    if edge_count > path_count - components:
        violations.append("cycle: edge count exceeds tree bound")

    def sg_fault(label, cell):
        r, c = cell
        if not (0 <= r < side and 0 <= c < side):
            return f"{label} out of bounds"
        if m.grid[r, c]:
            return f"{label} is a wall cell"
        if r % 2 == 0 or c % 2 == 0:
            return f"{label} not at odd-odd coordinates"
        return None

    for label, cell in (("start", m.start), ("goal", m.goal)):
        fault = sg_fault(label, cell)
        if fault:
            violations.append(fault)
    if m.start == m.goal:
        violations.append("start equals goal")

    sg_ok = not any(
        v.startswith(("start", "goal")) for v in violations
    )
    is_perfect = connected and edge_count == path_count - 1 and sg_ok
    return ValidationReport(
        is_perfect=is_perfect,
        path_cell_count=path_count,
        connected=connected,
        edge_count=edge_count,
        violations=violations,
    )


def solve_shortest_path(m: Maze) -> list[tuple[int, int]]:
    """BFS shortest path from start to goal, both endpoints included.

    In a perfect maze this is the unique simple path.
    """
    side = m.side
    prev = {m.start: None}
    queue = deque([m.start])
    while queue:
        cell = queue.popleft()
        if cell == m.goal:
            path = []
            while cell is not None:
                path.append(cell)
                cell = prev[cell]
            return path[::-1]
        r, c = cell
        for dr, dc in DIR_OFFSETS:
            nxt = (r + dr, c + dc)
            if 0 <= nxt[0] < side and 0 <= nxt[1] < side and not m.grid[nxt] and nxt not in prev:
                prev[nxt] = cell
                queue.append(nxt)
    raise NoPathError(f"goal {m.goal} unreachable from start {m.start}")


def render_ascii(m: Maze) -> str:
    rows = []
    for r in range(m.side):
        row = []
        for c in range(m.side):
            if (r, c) == m.start:
                row.append(START_CHAR)
            elif (r, c) == m.goal:
                row.append(GOAL_CHAR)
            else:
                row.append(WALL_CHAR if m.grid[r, c] else PATH_CHAR)
        rows.append("".join(row))
    return "\n".join(rows)


def parse_ascii(text: str) -> Maze:
    rows = [line for line in text.strip().splitlines()]
    side = len(rows)
    if side < 5 or (side - 3) % 2 != 0 or any(len(row) != side for row in rows):
        raise ValueError("not a square maze of side 2N+3")
    n = (side - 3) // 2
    grid = np.zeros((side, side), dtype=bool)
    start = goal = None
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch == WALL_CHAR:
                grid[r, c] = True
            elif ch == START_CHAR:
                start = (r, c)
            elif ch == GOAL_CHAR:
                goal = (r, c)
            elif ch != PATH_CHAR:
                raise ValueError(f"unexpected character {ch!r} at ({r},{c})")
    if start is None or goal is None:
        raise ValueError("maze must contain exactly one S and one G")
    return Maze(n=n, grid=grid, start=start, goal=goal)
