"""Exponent-matrix and alist file formats, plus spectrum report assembly."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from math import gcd

from .model import BaseMatrix, LiftedMatrix, ShiftAssignment, SlopeAssignment
from .oracle import TannerGraph

DIGEST_ALGORITHM = "sha256"


class FormatError(ValueError):
    """Malformed input file; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ExponentFile:
    base: BaseMatrix
    slopes: SlopeAssignment
    shifts: ShiftAssignment

    @property
    def m(self) -> int:
        return self.slopes.m

    @property
    def is_qc(self) -> bool:
        return self.shifts.is_qc


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with '#' comments stripped, paired with their 1-based number."""
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((n, body))
    return out


def _int_token(token: str, line: int, column: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"{what} {token!r} is not an integer", line, column) from None


def parse_exponent_file(text: str) -> ExponentFile:
    """Parse ``v k m`` followed by v rows of ``-``, ``s`` or ``s:a`` entries.

    Lines may carry ``#`` comments.  Columns in diagnostics count entries,
    not characters.
    """
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty file: expected a 'v k m' header")
    hline, header = lines[0]
    fields = header.split()
    if len(fields) != 3:
        raise FormatError(f"header must be 'v k m', got {len(fields)} fields", hline)
    v, k, m = (_int_token(t, hline, c, "header field") for c, t in enumerate(fields, start=1))
    if v < 1 or k < 1 or m < 1:
        raise FormatError("header values must be positive", hline)
    body = lines[1:]
    if len(body) != v:
        raise FormatError(f"header declares {v} rows, found {len(body)}", body[-1][0] if body else hline)

    rows: list[list[int]] = []
    slopes: dict[tuple[int, int], int] = {}
    shifts: dict[tuple[int, int], int] = {}
    for i, (ln, body_text) in enumerate(body):
        tokens = body_text.split()
        if len(tokens) != k:
            raise FormatError(f"expected {k} entries, found {len(tokens)}", ln)
        row = []
        for j, tok in enumerate(tokens):
            col = j + 1
            if tok == "-":
                row.append(0)
                continue
            s_tok, sep, a_tok = tok.partition(":")
            s = _int_token(s_tok, ln, col, "slope")
            a = _int_token(a_tok, ln, col, "shift") if sep else 1
            if not 0 <= s < m:
                raise FormatError(f"slope {s} outside 0..{m - 1}", ln, col)
            if sep:
                if not 1 <= a < max(m, 2):
                    raise FormatError(f"shift {a} outside 1..{m - 1}", ln, col)
                if gcd(a, m) != 1:
                    raise FormatError(f"shift {a} is not coprime to m={m}", ln, col)
            row.append(1)
            slopes[i, j] = s
            shifts[i, j] = a
        rows.append(row)

    for j in range(k):
        if not any(r[j] for r in rows):
            raise FormatError(f"column {j + 1} has no nonzero entry", body[-1][0], j + 1)
    return ExponentFile(BaseMatrix.from_rows(rows), SlopeAssignment(m, slopes), ShiftAssignment(m, shifts))


def serialize_exponent_file(base: BaseMatrix, slopes: SlopeAssignment, shifts: ShiftAssignment | None = None) -> str:
    """Canonical text: single spaces, no comments, ``s:a`` only where a != 1."""
    lines = [f"{base.v} {base.k} {slopes.m}"]
    for i, row in enumerate(base.entries):
        tokens = []
        for j, x in enumerate(row):
            if not x:
                tokens.append("-")
                continue
            a = 1 if shifts is None else shifts[i, j]
            tokens.append(f"{slopes[i, j]}" if a == 1 else f"{slopes[i, j]}:{a}")
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# alist


def _alist_ints(line: str, ln: int) -> list[int]:
    return [_int_token(t, ln, c, "value") for c, t in enumerate(line.split(), start=1)]


def parse_alist(text: str) -> TannerGraph:
    """Parse a MacKay alist file; zero padding in neighbour lists is ignored.

    Layout: ``N M`` (variables, checks), the two maximum degrees, the N
    variable degrees, the M check degrees, then N variable lines and M check
    lines of 1-based neighbours.
    """
    lines = [(n, s.strip()) for n, s in enumerate(text.splitlines(), start=1) if s.strip()]

    def take(idx: int, what: str) -> tuple[int, list[int]]:
        if idx >= len(lines):
            raise FormatError(f"file ends before {what}")
        ln, s = lines[idx]
        return ln, _alist_ints(s, ln)

    ln, dims = take(0, "the dimension line")
    if len(dims) != 2 or min(dims) < 1:
        raise FormatError("dimension line must hold two positive integers 'N M'", ln)
    n_var, n_chk = dims
    ln, maxes = take(1, "the maximum-degree line")
    if len(maxes) != 2:
        raise FormatError("maximum-degree line must hold two integers", ln)
    ln, var_deg = take(2, "the variable degree list")
    if len(var_deg) != n_var:
        raise FormatError(f"expected {n_var} variable degrees, found {len(var_deg)}", ln)
    ln, chk_deg = take(3, "the check degree list")
    if len(chk_deg) != n_chk:
        raise FormatError(f"expected {n_chk} check degrees, found {len(chk_deg)}", ln)
    if max(var_deg) > maxes[0] or max(chk_deg) > maxes[1]:
        raise FormatError("a node degree exceeds the declared maximum", lines[1][0])

    var_edges: set[tuple[int, int]] = set()
    for u in range(n_var):
        ln, nbrs = take(4 + u, f"the neighbour list of variable {u + 1}")
        nbrs = [x for x in nbrs if x != 0]
        if len(set(nbrs)) != len(nbrs):
            raise FormatError(f"variable {u + 1} repeats a neighbour", ln)
        if len(nbrs) != var_deg[u]:
            raise FormatError(f"variable {u + 1} lists {len(nbrs)} neighbours, degree is {var_deg[u]}", ln)
        for c in nbrs:
            if not 1 <= c <= n_chk:
                raise FormatError(f"variable {u + 1} names check {c}, outside 1..{n_chk}", ln)
            var_edges.add((c - 1, u))

    chk_edges: set[tuple[int, int]] = set()
    for c in range(n_chk):
        ln, nbrs = take(4 + n_var + c, f"the neighbour list of check {c + 1}")
        nbrs = [x for x in nbrs if x != 0]
        if len(set(nbrs)) != len(nbrs):
            raise FormatError(f"check {c + 1} repeats a neighbour", ln)
        if len(nbrs) != chk_deg[c]:
            raise FormatError(f"check {c + 1} lists {len(nbrs)} neighbours, degree is {chk_deg[c]}", ln)
        for u in nbrs:
            if not 1 <= u <= n_var:
                raise FormatError(f"check {c + 1} names variable {u}, outside 1..{n_var}", ln)
            chk_edges.add((c, u - 1))

    if var_edges != chk_edges:
        c, u = min(var_edges ^ chk_edges)
        raise FormatError(f"check {c + 1} and variable {u + 1} disagree about their edge")
    return TannerGraph.from_edges(n_chk, n_var, var_edges)


def write_alist(graph: TannerGraph | LiftedMatrix) -> str:
    """Serialize as alist with neighbour lists zero-padded to the maximum degree."""
    if isinstance(graph, LiftedMatrix):
        graph = TannerGraph.from_lifted(graph)
    var_lists = [[c + 1 for c in adj] for adj in graph.variable_adj]
    chk_lists = [[u + 1 for u in adj] for adj in graph.check_adj]
    max_v = max((len(a) for a in var_lists), default=0)
    max_c = max((len(a) for a in chk_lists), default=0)

    def padded(lst: list[int], width: int) -> str:
        return " ".join(str(x) for x in lst + [0] * (width - len(lst)))

    out = [
        f"{graph.n_variables} {graph.n_checks}",
        f"{max_v} {max_c}",
        " ".join(str(len(a)) for a in var_lists),
        " ".join(str(len(a)) for a in chk_lists),
    ]
    out += [padded(a, max_v) for a in var_lists]
    out += [padded(a, max_c) for a in chk_lists]
    return "\n".join(out) + "\n"


def looks_like_alist(text: str) -> bool:
    """Sniff the first content line: alist starts with two numbers, exponent files with three."""
    lines = _content_lines(text)
    return bool(lines) and len(lines[0][1].split()) == 2


def content_digest(text: str) -> str:
    """Hex digest of the file with line endings and trailing blanks normalized."""
    norm = "\n".join(line.rstrip() for line in text.replace("\r\n", "\n").split("\n")).strip("\n") + "\n"
    return hashlib.new(DIGEST_ALGORITHM, norm.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# reports


@dataclass
class SpectrumReport:
    path: str
    digest: str
    m: int | None
    max_length: int
    girth: int | None
    counts: dict[int, int]
    chains: dict[int, list[dict]] | None = None
    oracle: dict | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Deterministic payload; timings are excluded so reruns are byte-identical."""
        d = {
            "input": {"path": self.path, "digest": self.digest, "digest_algorithm": DIGEST_ALGORITHM},
            "m": self.m,
            "max_length": self.max_length,
            "girth": self.girth,
            "counts": {str(length): self.counts[length] for length in sorted(self.counts)},
        }
        if self.chains is not None:
            d["chains"] = {str(length): self.chains[length] for length in sorted(self.chains)}
        if self.oracle is not None:
            d["oracle"] = self.oracle
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        out = [f"input: {self.path}", f"{DIGEST_ALGORITHM}: {self.digest}"]
        if self.m is not None:
            out.append(f"m: {self.m}")
        out.append(f"max length: {self.max_length}")
        out.append(f"girth: {self.girth if self.girth is not None else 'none'}")
        out.append("")
        out.append(f"{'length':>6}  {'cycles':>14}")
        for length in sorted(self.counts):
            out.append(f"{length:>6}  {self.counts[length]:>14}")
        out.append("")
        out.append("lambda(x) = " + render_polynomial(self.counts))
        if self.chains is not None:
            for length in sorted(self.chains):
                out.append("")
                out.append(f"chains of length {length}: {len(self.chains[length])}")
                for entry in self.chains[length]:
                    out.append(f"  {entry['chain']}  r={entry['cycles']}")
        if self.oracle is not None:
            out.append("")
            out.append(f"oracle: {self.oracle['verdict']}")
        return "\n".join(out) + "\n"


def render_polynomial(counts: dict[int, int]) -> str:
    terms = [f"{counts[length]}x^{length}" for length in sorted(counts) if counts[length]]
    return " + ".join(terms) if terms else "0"
