"""Base matrices, block designs, slope/shift assignments and APM lifting."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

Entry = tuple[int, int]


class ModelError(ValueError):
    """Raised when a base matrix or an assignment is structurally invalid."""


@dataclass(frozen=True)
class BaseMatrix:
    """A v x k binary protograph matrix."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if not rows or not rows[0]:
            raise ModelError("base matrix must have at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ModelError(f"row {i} has {len(row)} entries, expected {width}")
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise ModelError(f"entry ({i},{j}) is {x}, expected 0 or 1")
        for j in range(width):
            if not any(row[j] for row in rows):
                raise ModelError(f"column {j} has no nonzero entry")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BaseMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def v(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        return len(self.entries[0])

    def nonzero(self) -> list[Entry]:
        """Nonzero positions in row-major order."""
        return [(i, j) for i, row in enumerate(self.entries) for j, x in enumerate(row) if x]


@dataclass(frozen=True)
class BlockDesign:
    """Ordered list of column blocks; ``blocks[j]`` holds the sorted rows of column j."""

    blocks: tuple[tuple[int, ...], ...]
    v: int

    def __post_init__(self) -> None:
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for j, b in enumerate(blocks):
            if not b:
                raise ModelError(f"block {j} is empty")
            if len(set(b)) != len(b):
                raise ModelError(f"block {j} repeats a row index")
            if any(not 0 <= i < self.v for i in b):
                raise ModelError(f"block {j} has a row index outside 0..{self.v - 1}")

    @property
    def k(self) -> int:
        return len(self.blocks)

    def entries(self) -> list[Entry]:
        """All (row, column) entries in column-major block order."""
        return [(i, j) for j, b in enumerate(self.blocks) for i in b]

    def row_columns(self) -> list[list[int]]:
        cols: list[list[int]] = [[] for _ in range(self.v)]
        for j, b in enumerate(self.blocks):
            for i in b:
                cols[i].append(j)
        return cols

    def to_matrix(self) -> BaseMatrix:
        rows = [[0] * self.k for _ in range(self.v)]
        for i, j in self.entries():
            rows[i][j] = 1
        return BaseMatrix.from_rows(rows)


def blocks_from_matrix(base: BaseMatrix) -> BlockDesign:
    return BlockDesign(
        tuple(tuple(i for i in range(base.v) if base.entries[i][j]) for j in range(base.k)),
        base.v,
    )


@dataclass(frozen=True)
class SlopeAssignment:
    """Lift size ``m`` and a slope in Z_m for every nonzero base entry."""

    m: int
    slopes: Mapping[Entry, int] = field(compare=True)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ModelError(f"lift size must be positive, got {self.m}")
        slopes = {(int(i), int(j)): int(s) for (i, j), s in self.slopes.items()}
        for (i, j), s in slopes.items():
            if not 0 <= s < self.m:
                raise ModelError(f"slope at ({i},{j}) is {s}, outside 0..{self.m - 1}")
        object.__setattr__(self, "slopes", slopes)

    def __getitem__(self, entry: Entry) -> int:
        try:
            return self.slopes[entry]
        except KeyError:
            raise ModelError(f"no slope defined at {entry}") from None

    def check_domain(self, design: BlockDesign) -> None:
        expected = set(design.entries())
        if set(self.slopes) != expected:
            missing = sorted(expected - set(self.slopes))
            extra = sorted(set(self.slopes) - expected)
            raise ModelError(f"slope domain mismatch: missing {missing}, extra {extra}")


@dataclass(frozen=True)
class ShiftAssignment:
    """A unit a in Z_m^* for every nonzero base entry; all ones is the QC case."""

    m: int
    shifts: Mapping[Entry, int]

    def __post_init__(self) -> None:
        shifts = {(int(i), int(j)): int(a) for (i, j), a in self.shifts.items()}
        for (i, j), a in shifts.items():
            # m == 1 admits only the trivial unit, stored as 1
            if self.m == 1:
                if a != 1:
                    raise ModelError(f"shift at ({i},{j}) must be 1 when m = 1")
                continue
            if not 1 <= a < self.m:
                raise ModelError(f"shift at ({i},{j}) is {a}, outside 1..{self.m - 1}")
            if gcd(a, self.m) != 1:
                raise ModelError(f"shift at ({i},{j}) is {a}, not coprime to m={self.m}")
        object.__setattr__(self, "shifts", shifts)

    @classmethod
    def ones(cls, entries: Iterable[Entry], m: int) -> "ShiftAssignment":
        return cls(m, {e: 1 for e in entries})

    @property
    def is_qc(self) -> bool:
        return all(a == 1 for a in self.shifts.values())

    def __getitem__(self, entry: Entry) -> int:
        try:
            return self.shifts[entry]
        except KeyError:
            raise ModelError(f"no shift defined at {entry}") from None

    def check_domain(self, design: BlockDesign) -> None:
        if set(self.shifts) != set(design.entries()):
            raise ModelError("shift domain does not match the nonzero base entries")


def apm_permutation(m: int, s: int, a: int = 1) -> tuple[int, ...]:
    """Column -> row map of the affine permutation matrix ``I_m^{s,a}``.

    Entry (row, col) is one iff ``row = a*col + s (mod m)``.
    """
    if m < 1:
        raise ModelError(f"m must be positive, got {m}")
    if not 0 <= s < m:
        raise ModelError(f"slope {s} outside 0..{m - 1}")
    if gcd(a, m) != 1:
        raise ModelError(f"shift {a} is not invertible modulo {m}")
    return tuple((a * c + s) % m for c in range(m))


@dataclass(frozen=True)
class LiftedMatrix:
    """Sparse vm x km parity-check matrix, stored as a set of 1-positions."""

    rows: int
    cols: int
    positions: frozenset[tuple[int, int]]

    @property
    def nnz(self) -> int:
        return len(self.positions)

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.positions:
            dense[r][c] = 1
        return dense


def lift(
    base: BaseMatrix | BlockDesign,
    slopes: SlopeAssignment,
    shifts: ShiftAssignment | None = None,
) -> LiftedMatrix:
    design = base if isinstance(base, BlockDesign) else blocks_from_matrix(base)
    m = slopes.m
    slopes.check_domain(design)
    if shifts is None:
        shifts = ShiftAssignment.ones(design.entries(), m)
    if shifts.m != m:
        raise ModelError(f"slope lift size {m} differs from shift lift size {shifts.m}")
    shifts.check_domain(design)
    positions = set()
    for i, j in design.entries():
        perm = apm_permutation(m, slopes[i, j], shifts[i, j])
        for c, r in enumerate(perm):
            positions.add((i * m + r, j * m + c))
    return LiftedMatrix(design.v * m, design.k * m, frozenset(positions))


def slopes_from_rows(rows: Sequence[Sequence[int | None]], m: int) -> tuple[BaseMatrix, SlopeAssignment]:
    """Build a base matrix and slopes from an exponent table (``None`` = zero block)."""
    base = BaseMatrix.from_rows([[0 if x is None else 1 for x in row] for row in rows])
    slopes = {
        (i, j): x % m for i, row in enumerate(rows) for j, x in enumerate(row) if x is not None
    }
    return base, SlopeAssignment(m, slopes)
