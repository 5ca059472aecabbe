"""Cycle chains in the base graph: closure, lifted walk traces, allowability, isomorphism.

A chain ``(i_0, j_0, ..., i_{l-1}, j_{l-1})`` lists the base edges
``(i_t, j_t)`` at which the walk enters column ``j_t``; it leaves that column
at ``(i_{t+1}, j_t)`` and moves along row ``i_{t+1}``.  Lifted points follow
the APM rule ``row = a*col + s (mod m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .model import BlockDesign, Entry, ModelError, ShiftAssignment, SlopeAssignment

Pairs = tuple[Entry, ...]


class ChainError(ValueError):
    """Raised for structurally invalid chains or chains outside an assignment's domain."""


@dataclass(frozen=True)
class CycleChain:
    pairs: Pairs

    def __post_init__(self) -> None:
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if len(pairs) < 2:
            raise ChainError("a cycle chain needs at least two pairs")
        l = len(pairs)
        for t in range(l):
            (i, j), (i2, j2) = pairs[t], pairs[(t + 1) % l]
            if i == i2:
                raise ChainError(f"consecutive rows repeat at position {t}: i={i}")
            if j == j2:
                raise ChainError(f"consecutive columns repeat at position {t}: j={j}")

    @classmethod
    def from_flat(cls, seq: Sequence[int]) -> "CycleChain":
        if len(seq) % 2:
            raise ChainError("flat chain must have even length")
        return cls(tuple((seq[2 * t], seq[2 * t + 1]) for t in range(len(seq) // 2)))

    @property
    def half_length(self) -> int:
        return len(self.pairs)

    @property
    def length(self) -> int:
        return 2 * len(self.pairs)

    def flat(self) -> tuple[int, ...]:
        return tuple(x for p in self.pairs for x in p)

    def exit_edges(self) -> Pairs:
        """The edges ``(i_{t+1}, j_t)`` where the walk leaves each column."""
        l = len(self.pairs)
        return tuple((self.pairs[(t + 1) % l][0], self.pairs[t][1]) for t in range(l))

    def rotate(self, t: int) -> "CycleChain":
        t %= len(self.pairs)
        return CycleChain(self.pairs[t:] + self.pairs[:t])

    def reversed(self) -> "CycleChain":
        return CycleChain(reverse_pairs(self.pairs))

    def validate(self, design: BlockDesign) -> None:
        """Check that every edge used by the chain exists in ``design``."""
        blocks = design.blocks
        for i, j in self.pairs + self.exit_edges():
            if not 0 <= j < design.k or i not in blocks[j]:
                raise ChainError(f"edge ({i},{j}) is not a nonzero base entry")

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.flat())) + ")"


def reverse_pairs(pairs: Pairs) -> Pairs:
    """Read a chain backwards: ``(i_0, j_{l-1}, i_{l-1}, j_{l-2}, ..., i_1, j_0)``."""
    l = len(pairs)
    return tuple((pairs[-t % l][0], pairs[(-t - 1) % l][1]) for t in range(l))


def readings(pairs: Pairs) -> list[Pairs]:
    """Every even rotation of the forward and the reversed reading."""
    rev = reverse_pairs(pairs)
    l = len(pairs)
    return [pairs[t:] + pairs[:t] for t in range(l)] + [rev[t:] + rev[:t] for t in range(l)]


def anchored_readings(pairs: Pairs, edge: Entry) -> list[Pairs]:
    """Readings of ``pairs`` whose first pair is ``edge``."""
    return [r for r in readings(pairs) if r[0] == edge]


def _as_pairs(chain: CycleChain | Pairs | Sequence[int]) -> Pairs:
    """Pairs of a chain, a pair sequence, or a flat key as returned by :func:`canonical_key`."""
    if isinstance(chain, CycleChain):
        return chain.pairs
    seq = tuple(chain)
    if seq and isinstance(seq[0], int):
        return CycleChain.from_flat(seq).pairs
    return seq


def canonical_key(chain: CycleChain | Pairs, k: int | None = None) -> tuple[int, ...]:
    """Lexicographically least flat reading over rotations and reversal.

    ``k`` is accepted for symmetry with :func:`kadic_encodings`; the
    tuple order does not depend on it.
    """
    best = min(readings(_as_pairs(chain)))
    return tuple(x for p in best for x in p)


def is_isomorphic(a: CycleChain | Pairs, b: CycleChain | Pairs, k: int | None = None) -> bool:
    pa, pb = _as_pairs(a), _as_pairs(b)
    return len(pa) == len(pb) and canonical_key(pa) == canonical_key(pb)


def kadic_encodings(chain: CycleChain | Pairs, base: int) -> tuple[int, int]:
    """Right and left base-``base`` encodings of a chain.

    ``base`` must exceed every row and column index.
    """
    pairs = _as_pairs(chain)
    if any(i >= base or j >= base for i, j in pairs):
        raise ChainError(f"base {base} does not exceed every chain index")
    right = sum((i + j * base) * base ** (2 * t) for t, (i, j) in enumerate(pairs))
    left = sum((i + j * base) * base ** (2 * t) for t, (i, j) in enumerate(reverse_pairs(pairs)))
    return right, left


def isomorphic_by_encoding(a: CycleChain | Pairs, b: CycleChain | Pairs, base: int) -> bool:
    """Isomorphism test through digit rotation modulo ``base**(2l) - 1``."""
    pa, pb = _as_pairs(a), _as_pairs(b)
    if len(pa) != len(pb):
        return False
    l = len(pa)
    modulus = base ** (2 * l) - 1
    right_a, _ = kadic_encodings(pa, base)
    right_b, left_b = kadic_encodings(pb, base)
    target = right_a % modulus
    for t in range(l):
        factor = pow(base, 2 * t, modulus)
        if (factor * right_b) % modulus == target or (factor * left_b) % modulus == target:
            return True
    return False


def closure_residue_qc(chain: CycleChain, slopes: SlopeAssignment) -> int:
    """``sum_t (s[i_t, j_t] - s[i_{t+1}, j_t]) mod m``; zero iff the chain closes."""
    l = chain.half_length
    p = chain.pairs
    try:
        total = sum(slopes[p[t]] - slopes[p[(t + 1) % l][0], p[t][1]] for t in range(l))
    except ModelError as exc:
        raise ChainError(str(exc)) from None
    return total % slopes.m


def _inverse(a: int, m: int) -> int:
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ChainError(f"shift {a} has no inverse modulo {m}") from None


@dataclass(frozen=True)
class ApmClosure:
    p_products: tuple[int, ...]
    residue: int
    satisfied: bool


def closure_apm(
    chain: CycleChain, slopes: SlopeAssignment, shifts: ShiftAssignment | None = None
) -> ApmClosure:
    m = slopes.m
    p = chain.pairs
    l = len(p)
    exits = chain.exit_edges()
    try:
        a_in = [1 if shifts is None else shifts[e] for e in p]
        a_out = [1 if shifts is None else shifts[e] for e in exits]
        s_in = [slopes[e] for e in p]
        s_out = [slopes[e] for e in exits]
    except ModelError as exc:
        raise ChainError(str(exc)) from None
    ratios = [a_out[t] * _inverse(a_in[t], m) % m for t in range(l)]
    prods = [1] * (l + 1)
    for h in range(l - 1, -1, -1):
        prods[h] = ratios[h] * prods[h + 1] % m
    residue = sum(prods[t] * s_in[t] - prods[t + 1] * s_out[t] for t in range(l)) % m
    p0 = prods[0] % m
    satisfied = (p0 == 1 % m and residue == 0) or residue % gcd(p0 - 1, m) == 0
    return ApmClosure(tuple(prods[:l]), residue, satisfied)


@dataclass(frozen=True)
class WalkTrace:
    """Lifted indices of the walk of a chain started at ``start_row`` of block (i_0, j_0).

    ``row_indices[t]`` is the row of the check node entered in row block
    ``i_t``; ``col_indices[t]`` is the column of the variable node in column
    block ``j_t``.  ``end_row`` is the row reached after the last pair.
    """

    start_row: int
    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]
    end_row: int

    @property
    def closes(self) -> bool:
        return self.end_row == self.start_row

    def check_nodes(self, chain: CycleChain) -> list[tuple[int, int]]:
        return [(i, r) for (i, _), r in zip(chain.pairs, self.row_indices)]

    def variable_nodes(self, chain: CycleChain) -> list[tuple[int, int]]:
        return [(j, c) for (_, j), c in zip(chain.pairs, self.col_indices)]

    def is_simple(self, chain: CycleChain) -> bool:
        checks = self.check_nodes(chain)
        variables = self.variable_nodes(chain)
        return len(set(checks)) == len(checks) and len(set(variables)) == len(variables)

    def lifted_edges(self, chain: CycleChain, m: int) -> frozenset[tuple[int, int]]:
        """1-positions (global row, global column) traversed by the walk."""
        l = chain.half_length
        rows = list(self.row_indices) + [self.end_row]
        edges = set()
        for t, (i, j) in enumerate(chain.pairs):
            c = j * m + self.col_indices[t]
            edges.add((i * m + rows[t], c))
            edges.add((chain.pairs[(t + 1) % l][0] * m + rows[t + 1], c))
        return frozenset(edges)


def walk_trace(
    chain: CycleChain,
    slopes: SlopeAssignment,
    shifts: ShiftAssignment | None = None,
    start_row: int = 0,
) -> WalkTrace:
    m = slopes.m
    if not 0 <= start_row < m:
        raise ChainError(f"start row {start_row} outside 0..{m - 1}")
    p = chain.pairs
    l = len(p)
    rows, cols = [], []
    row = start_row
    try:
        for t in range(l):
            i, j = p[t]
            i_next = p[(t + 1) % l][0]
            a = 1 if shifts is None else shifts[i, j]
            a_next = 1 if shifts is None else shifts[i_next, j]
            col = _inverse(a, m) * (row - slopes[i, j]) % m
            rows.append(row)
            cols.append(col)
            row = (a_next * col + slopes[i_next, j]) % m
    except ModelError as exc:
        raise ChainError(str(exc)) from None
    return WalkTrace(start_row, tuple(rows), tuple(cols), row)


def is_allowable(
    chain: CycleChain, slopes: SlopeAssignment, shifts: ShiftAssignment | None = None
) -> bool:
    """Whether the lifted closed walk of the chain is a simple cycle.

    For QC input the walk from row 0 decides (every start row is a translate).
    For APM input every start row whose walk closes must give a simple cycle,
    and at least one must close.
    """
    if shifts is None or shifts.is_qc:
        trace = walk_trace(chain, slopes, None, 0)
        return trace.closes and trace.is_simple(chain)
    closing = [
        tr for r in range(slopes.m) if (tr := walk_trace(chain, slopes, shifts, r)).closes
    ]
    return bool(closing) and all(tr.is_simple(chain) for tr in closing)


def is_allowable_qc_delta(chain: CycleChain, slopes: SlopeAssignment) -> bool:
    """QC allowability from partial slope-difference sums, without tracing the walk.

    For ``0 <= p < q <= l-1``: the row offset accumulated between entering
    row block ``i_p`` and ``i_q`` must be nonzero when ``i_p == i_q``, and the
    column offset between columns ``j_p`` and ``j_q`` nonzero when ``j_p == j_q``.
    Assumes the chain closes.
    """
    m = slopes.m
    p = chain.pairs
    l = len(p)
    exits = chain.exit_edges()
    # row_step[k]: row change across column j_k; col_step[k]: column change along row i_{k+1}
    row_step = [slopes[exits[k]] - slopes[p[k]] for k in range(l)]
    col_step = [slopes[exits[k]] - slopes[p[(k + 1) % l]] for k in range(l)]
    for a in range(l):
        drow = dcol = 0
        for b in range(a + 1, l):
            drow += row_step[b - 1]
            dcol += col_step[b - 1]
            if p[a][0] == p[b][0] and drow % m == 0:
                return False
            if p[a][1] == p[b][1] and dcol % m == 0:
                return False
    return True


def parse_chain(text: str | Iterable[int]) -> CycleChain:
    """Accept ``"(1,2,0,0)"``, ``"1 2 0 0"`` or an integer sequence."""
    if isinstance(text, str):
        cleaned = text.strip().strip("()[]").replace(",", " ")
        values = [int(x) for x in cleaned.split()]
    else:
        values = [int(x) for x in text]
    return CycleChain.from_flat(values)
