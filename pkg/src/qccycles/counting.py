"""Cycle counting from non-isomorphic cycle chains.

Chains are enumerated column by column over growing prefixes of the block
design.  Each prefix step adds one base entry (the *anchor*); the step only
looks for chains whose largest edge, in column-major order, is the anchor,
so every isomorphism class is met at exactly one step.  Within a step the QC
search meets in the middle: half-walks leave the anchor forwards and
backwards from lifted row 0, carrying bitmasks of the lifted vertices they
visit, and are joined on (row block, lifted row).  A join whose masks only
share the start vertex is a simple lifted cycle, i.e. an allowable chain.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .chains import (
    ChainError,
    CycleChain,
    Pairs,
    anchored_readings,
    canonical_key,
    closure_apm,
    closure_residue_qc,
    is_allowable,
    walk_trace,
)
from .model import (
    BaseMatrix,
    BlockDesign,
    Entry,
    ShiftAssignment,
    SlopeAssignment,
    blocks_from_matrix,
)


def period(values, m: int) -> int:
    """Smallest T > 0 with ``values + T == values`` in Z_m."""
    a = {x % m for x in values}
    if not a:
        raise ValueError("period of an empty set is undefined")
    for t in range(1, m + 1):
        if m % t == 0 and {(x + t) % m for x in a} == a:
            return t
    return m  # unreachable: t = m always works


def _self_period(pairs: Pairs) -> int:
    l = len(pairs)
    for e in range(1, l):
        if l % e == 0 and pairs[e:] + pairs[:e] == pairs:
            return e
    return l


def repetition(chain: CycleChain | Pairs) -> tuple[frozenset[Entry], int]:
    """``(I(L), n(L))``: pairs of one repeating unit and the number of repeats."""
    pairs = chain.pairs if isinstance(chain, CycleChain) else tuple(chain)
    l = len(pairs)
    e = _self_period(pairs)
    if e == l:
        return frozenset(), 1
    unit = set()
    for t in range(e):
        unit.add(pairs[t])
        unit.add((pairs[(t + 1) % l][0], pairs[t][1]))
    return frozenset(unit), l // e


def cycles_per_chain(chain: CycleChain, slopes: SlopeAssignment) -> int:
    """Number of lifted 2l-cycles represented by an allowable QC chain: m / n(L)."""
    if closure_residue_qc(chain, slopes) != 0 or not is_allowable(chain, slopes):
        raise ChainError(f"chain {chain} is not an allowable QC cycle chain")
    return slopes.m // repetition(chain)[1]


def block_row_sets(chain: CycleChain, slopes: SlopeAssignment) -> dict[Entry, frozenset[int]]:
    """Row-index sets A(i, j) of the chain's points in each block it crosses.

    With ``P_t = sum_{k<=t} (s[i_k, j_k] - s[i_{k+1}, j_k]) mod m``, the entry
    block ``(i_t, j_t)`` collects ``P_t`` and the exit block
    ``(i_{t+1}, j_t)`` collects ``P_{t-1}`` (``P_{-1} = 0``).
    """
    m = slopes.m
    pairs = chain.pairs
    exits = chain.exit_edges()
    sets: dict[Entry, set[int]] = {}
    prev = 0
    for t, (entry, exit_) in enumerate(zip(pairs, exits)):
        cur = (prev + slopes[entry] - slopes[exit_]) % m
        sets.setdefault(entry, set()).add(cur)
        sets.setdefault(exit_, set()).add(prev)
        prev = cur
    return {e: frozenset(s) for e, s in sets.items()}


@dataclass(frozen=True)
class ChainAnalysis:
    chain: CycleChain
    residue: int
    allowable: bool
    invariant_pairs: frozenset[Entry]
    repetition: int
    cycles: int
    block_row_sets: dict[Entry, frozenset[int]] = field(compare=False)


def analyze_chain(chain: CycleChain, slopes: SlopeAssignment) -> ChainAnalysis:
    residue = closure_residue_qc(chain, slopes)
    allowable = residue == 0 and is_allowable(chain, slopes)
    unit, n = repetition(chain)
    return ChainAnalysis(
        chain=chain,
        residue=residue,
        allowable=allowable,
        invariant_pairs=unit,
        repetition=n,
        cycles=slopes.m // n if allowable else 0,
        block_row_sets=block_row_sets(chain, slopes),
    )


@dataclass(frozen=True)
class DesignPrefix:
    """The design restricted to its first ``e`` non-leading block elements."""

    e: int
    column: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def new_entry(self) -> Entry:
        return (self.blocks[-1][-1], self.column)


def design_prefixes(design: BlockDesign) -> list[DesignPrefix]:
    out = []
    e = 0
    for p, block in enumerate(design.blocks):
        for u in range(1, len(block)):
            e += 1
            out.append(DesignPrefix(e, p, design.blocks[:p] + (block[: u + 1],)))
    return out


@dataclass(frozen=True)
class CycleSpectrum:
    counts: dict[int, int]
    bound: int

    @property
    def girth(self) -> int | None:
        for length in sorted(self.counts):
            if self.counts[length] > 0:
                return length
        return None

    def nonzero(self) -> dict[int, int]:
        return {k: v for k, v in sorted(self.counts.items()) if v}


# ---------------------------------------------------------------------------
# search engine


def _restricted_adjacency(blocks: tuple[tuple[int, ...], ...], v: int):
    col_rows = [list(b) for b in blocks]
    row_cols: list[list[int]] = [[] for _ in range(v)]
    for j, b in enumerate(blocks):
        for i in b:
            row_cols[i].append(j)
    return col_rows, row_cols


def _is_anchor_least(pairs: Pairs) -> bool:
    """Whether ``pairs`` is the least reading among those starting at its first pair."""
    anchor = pairs[0]
    i0, j0 = anchor
    l = len(pairs)
    occurrences = pairs.count(anchor)
    for t in range(l - 1):
        if pairs[t][1] == j0 and pairs[t + 1][0] == i0:
            occurrences += 1
    if occurrences == 1:
        return True
    return pairs == min(anchored_readings(pairs, anchor))


def _qc_anchor_chains(
    blocks: tuple[tuple[int, ...], ...],
    v: int,
    slope_rows: list[list[int]],
    m: int,
    l_max: int,
) -> Iterator[tuple[int, Pairs]]:
    """Allowable zero-residue chains whose largest edge is the prefix's new entry.

    Yields one reading per isomorphism class, for every half-length 2..l_max.
    """
    col_rows, row_cols = _restricted_adjacency(blocks, v)
    i0, j0 = blocks[-1][-1], len(blocks) - 1
    s = slope_rows
    k = len(blocks)
    cbit = [[1 << (i * m + r) for r in range(m)] for i in range(v)]
    vbit = [[1 << (v * m + j * m + c) for c in range(m)] for j in range(k)]
    h_fwd = (l_max + 1) // 2
    h_bwd = l_max // 2
    fwd: list[dict] = [{} for _ in range(h_fwd + 1)]
    bwd: list[dict] = [{} for _ in range(h_bwd + 1)]
    start = cbit[i0][0]

    def forward(i, row, j, mask, pairs, depth):
        # at check (i, row), about to cross column j
        col = (row - s[i][j]) % m
        b = vbit[j][col]
        if mask & b:
            return
        mask |= b
        depth += 1
        table = fwd[depth]
        for i2 in col_rows[j]:
            if i2 == i:
                continue
            row2 = (col + s[i2][j]) % m
            key = (i2, row2)
            if key in table:
                table[key].append((j, mask, pairs))
            else:
                table[key] = [(j, mask, pairs)]
            if depth < h_fwd:
                cb = cbit[i2][row2]
                if mask & cb:
                    continue
                m2 = mask | cb
                for j2 in row_cols[i2]:
                    if j2 != j:
                        forward(i2, row2, j2, m2, pairs + ((i2, j2),), depth)

    def backward(i, row, j_next, mask, pairs, depth):
        # at check (i, row); the walk continues from here along column j_next
        depth += 1
        table = bwd[depth]
        for j in row_cols[i]:
            if j == j_next:
                continue
            col = (row - s[i][j]) % m
            b = vbit[j][col]
            if mask & b:
                continue
            mb = mask | b
            for i2 in col_rows[j]:
                if i2 == i:
                    continue
                row2 = (col + s[i2][j]) % m
                cb = cbit[i2][row2]
                if mb & cb:
                    continue
                m2 = mb | cb
                p2 = pairs + ((i2, j),)
                key = (i2, row2)
                if key in table:
                    table[key].append((j, m2, p2))
                else:
                    table[key] = [(j, m2, p2)]
                if depth < h_bwd:
                    backward(i2, row2, j, m2, p2, depth)

    forward(i0, 0, j0, start, ((i0, j0),), 0)
    if h_bwd:
        backward(i0, 0, j0, start, (), 0)

    for l in range(2, l_max + 1):
        f_table = fwd[(l + 1) // 2]
        b_table = bwd[l // 2]
        for key, f_list in f_table.items():
            b_list = b_table.get(key)
            if not b_list:
                continue
            for jf, fm, fp in f_list:
                for jb, bm, bp in b_list:
                    if jf != jb and fm & bm == start:
                        pairs = fp + bp[::-1]
                        if _is_anchor_least(pairs):
                            yield l, pairs


def _base_anchor_walks(
    blocks: tuple[tuple[int, ...], ...], v: int, l_max: int
) -> Iterator[tuple[int, Pairs]]:
    """Tailless backtrackless closed base walks whose largest edge is the new entry."""
    col_rows, row_cols = _restricted_adjacency(blocks, v)
    i0, j0 = blocks[-1][-1], len(blocks) - 1

    def extend(i, j, pairs):
        l = len(pairs)
        for i2 in col_rows[j]:
            if i2 == i:
                continue
            if i2 == i0 and j != j0 and l >= 2 and _is_anchor_least(pairs):
                yield l, pairs
            if l < l_max:
                for j2 in row_cols[i2]:
                    if j2 != j:
                        yield from extend(i2, j2, pairs + ((i2, j2),))

    yield from extend(i0, j0, ((i0, j0),))


def _slope_rows(design: BlockDesign, slopes: SlopeAssignment) -> list[list[int]]:
    rows = [[0] * design.k for _ in range(design.v)]
    for (i, j), x in slopes.slopes.items():
        rows[i][j] = x
    return rows


def _qc_task(args) -> dict[int, list]:
    blocks, v, slope_rows, m, l_max, want_chains = args
    out: dict[int, list] = {}
    for l, pairs in _qc_anchor_chains(blocks, v, slope_rows, m, l_max):
        bucket = out.setdefault(l, [0, 0, []])
        bucket[0] += 1
        bucket[1] += m // (len(pairs) // _self_period(pairs))
        if want_chains:
            bucket[2].append(canonical_key(pairs))
    return out


def _run_tasks(func, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def _qc_search(
    design: BlockDesign, slopes: SlopeAssignment, l_max: int, want_chains: bool, workers: int
) -> dict[int, list]:
    slopes.check_domain(design)
    srows = _slope_rows(design, slopes)
    tasks = [
        (pre.blocks, design.v, srows, slopes.m, l_max, want_chains)
        for pre in design_prefixes(design)
    ]
    merged: dict[int, list] = {l: [0, 0, []] for l in range(2, l_max + 1)}
    for result in _run_tasks(_qc_task, tasks, workers):
        for l, (n_chains, n_cycles, keys) in result.items():
            merged[l][0] += n_chains
            merged[l][1] += n_cycles
            merged[l][2].extend(keys)
    return merged


def iter_chains(
    base: BaseMatrix | BlockDesign, slopes: SlopeAssignment, l_max: int
) -> Iterator[tuple[int, Pairs]]:
    """Stream ``(half_length, pairs)`` with one reading per class, serially.

    The readings are not canonical; use :func:`canonical_key` when needed.
    """
    design = _as_design(base)
    slopes.check_domain(design)
    srows = _slope_rows(design, slopes)
    for pre in design_prefixes(design):
        yield from _qc_anchor_chains(pre.blocks, design.v, srows, slopes.m, l_max)


def enumerate_chains(
    design: BlockDesign, slopes: SlopeAssignment, l_max: int, workers: int = 1
) -> dict[int, set[tuple[int, ...]]]:
    """Canonical allowable zero-residue chains of every half-length 2..l_max."""
    merged = _qc_search(design, slopes, l_max, True, workers)
    result = {}
    for l, (_, _, keys) in merged.items():
        found = set(keys)
        if len(found) != len(keys):
            raise AssertionError(f"isomorphism class met twice at half-length {l}")
        result[l] = found
    return result


def _as_design(base: BaseMatrix | BlockDesign) -> BlockDesign:
    return base if isinstance(base, BlockDesign) else blocks_from_matrix(base)


def cycle_spectrum(
    base: BaseMatrix | BlockDesign, slopes: SlopeAssignment, l_max: int, workers: int = 1
) -> CycleSpectrum:
    """Exact QC cycle counts for lengths 4..2*l_max."""
    merged = _qc_search(_as_design(base), slopes, l_max, False, workers)
    return CycleSpectrum({2 * l: merged[l][1] for l in range(2, l_max + 1)}, 2 * l_max)


def base_closed_walks(design: BlockDesign, l_max: int) -> dict[int, list[Pairs]]:
    """One reading per class of tailless backtrackless closed walks in the base graph."""
    out: dict[int, list[Pairs]] = {l: [] for l in range(2, l_max + 1)}
    for pre in design_prefixes(design):
        for l, pairs in _base_anchor_walks(pre.blocks, design.v, l_max):
            out[l].append(pairs)
    return out


def apm_chain_cycles(
    chain: CycleChain, slopes: SlopeAssignment, shifts: ShiftAssignment | None
) -> int:
    """Distinct simple lifted cycles traced by ``chain`` over all start rows."""
    if not closure_apm(chain, slopes, shifts).satisfied:
        return 0
    m = slopes.m
    seen = set()
    for r in range(m):
        trace = walk_trace(chain, slopes, shifts, r)
        if trace.closes and trace.is_simple(chain):
            seen.add(trace.lifted_edges(chain, m))
    return len(seen)


def _apm_task(args) -> dict[int, int]:
    blocks, v, slopes, shifts, l_max = args
    out: dict[int, int] = {}
    for l, pairs in _base_anchor_walks(blocks, v, l_max):
        n = apm_chain_cycles(CycleChain(pairs), slopes, shifts)
        if n:
            out[l] = out.get(l, 0) + n
    return out


def apm_cycle_spectrum(
    base: BaseMatrix | BlockDesign,
    slopes: SlopeAssignment,
    shifts: ShiftAssignment | None,
    l_max: int,
    workers: int = 1,
) -> CycleSpectrum:
    """Cycle counts for APM lifts, tracing every start row of every base chain class."""
    design = _as_design(base)
    slopes.check_domain(design)
    if shifts is not None:
        shifts.check_domain(design)
    tasks = [(pre.blocks, design.v, slopes, shifts, l_max) for pre in design_prefixes(design)]
    counts = {2 * l: 0 for l in range(2, l_max + 1)}
    for result in _run_tasks(_apm_task, tasks, workers):
        for l, n in result.items():
            counts[2 * l] += n
    return CycleSpectrum(counts, 2 * l_max)


def girth(
    base: BaseMatrix | BlockDesign,
    slopes: SlopeAssignment,
    shifts: ShiftAssignment | None = None,
    l_hint: int = 12,
) -> int | None:
    """Length of the shortest cycle up to ``2*l_hint``, or None if there is none."""
    design = _as_design(base)
    qc = shifts is None or shifts.is_qc
    for l in range(2, l_hint + 1):
        if qc:
            spec = cycle_spectrum(design, slopes, l)
        else:
            spec = apm_cycle_spectrum(design, slopes, shifts, l)
        if spec.counts[2 * l]:
            return 2 * l
    return None
