"""Smith normal form over the integers.

Two entry points: `smith_normal_form` keeps the unimodular transforms and
suits small dense matrices; `invariant_factors` drops the transforms and
runs a sparse elimination pass (greedy +-1 pivots, Markowitz-style fill
control) before handing the small remaining core to the dense routine.
All arithmetic is on Python ints, so entry growth is harmless.
"""

from __future__ import annotations

from dataclasses import dataclass
import heapq
from math import gcd
from typing import Mapping, Sequence


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = diag(diagonal) padded to source_shape."""

    diagonal: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    source_shape: tuple[int, int]

    def verify(self, a: Sequence[Sequence[int]]) -> bool:
        rows, cols = self.source_shape
        prod = _mul(_mul(self.u, [list(r) for r in a]), self.v)
        for i in range(rows):
            for j in range(cols):
                want = self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                if prod[i][j] != want:
                    return False
        for d, dn in zip(self.diagonal, self.diagonal[1:]):
            if d == 0 or dn % d:
                return False
        return True


def _mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Dense SNF with transforms, classical pivot reduction."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[int(x) for x in row] for row in a]
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in m:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # find a nonzero pivot of least magnitude
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = m[i][j]
                if x and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            if m[t][t] < 0:
                negate_row(t)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(t, i, -(m[i][t] // p))
                    if m[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(t, j, -(m[t][j] // p))
                    if m[t][j]:
                        dirty = True
            if not dirty:
                break
            best = (t, t)
            for i in range(t, rows):
                for j in range(t, cols):
                    x = m[i][j]
                    if x and abs(x) < abs(m[best[0]][best[1]]):
                        best = (i, j)
        t += 1

    diag = [m[i][i] for i in range(limit) if m[i][i]]
    # enforce the divisibility chain: gcd/lcm sweeps move factors left
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a_, b_ = diag[i], diag[i + 1]
            if b_ % a_:
                g = gcd(a_, b_)
                l = a_ * b_ // g
                _chain_fix(m, u, v, i, i + 1, g, l)
                diag[i], diag[i + 1] = g, l
                changed = True
    return SmithDecomposition(tuple(diag), tuple(tuple(r) for r in u),
                              tuple(tuple(r) for r in v), (rows, cols))


def _chain_fix(m, u, v, i, j, g, l):
    """Replace diag entries (a, b) at i, j by (gcd, lcm) via unimodular ops."""
    a, b = m[i][i], m[j][j]
    # x*a + y*b = g
    x, y = _bezout(a, b)
    # row_i += row_j ; col arrangement mirrors the 2x2 identity
    # [[x, y], [-b/g, a/g]] * diag(a,b) * [[1, -y*b/g], [1, x*a/g]] = diag(g, l)
    bg, ag = b // g, a // g
    for col in range(len(m[0])):
        ri, rj = m[i][col], m[j][col]
        m[i][col] = x * ri + y * rj
        m[j][col] = -bg * ri + ag * rj
    for col in range(len(u[0])):
        ri, rj = u[i][col], u[j][col]
        u[i][col] = x * ri + y * rj
        u[j][col] = -bg * ri + ag * rj
    for row in range(len(m)):
        ci, cj = m[row][i], m[row][j]
        m[row][i] = ci + cj
        m[row][j] = -y * bg * ci + x * ag * cj
    for row in range(len(v)):
        ci, cj = v[row][i], v[row][j]
        v[row][i] = ci + cj
        v[row][j] = -y * bg * ci + x * ag * cj


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def invariant_factors(
    entries: Mapping[tuple[int, int], int] | Sequence[Sequence[int]],
    shape: tuple[int, int] | None = None,
) -> tuple[int, ...]:
    """Invariant factors (nonzero SNF diagonal) without transforms.

    Accepts a dense row list or a sparse {(row, col): value} mapping with
    an explicit shape.
    """
    if isinstance(entries, Mapping):
        if shape is None:
            raise ValueError("sparse input needs an explicit shape")
        items = {k: int(val) for k, val in entries.items() if val}
    else:
        items = {}
        for i, row in enumerate(entries):
            for j, val in enumerate(row):
                if val:
                    items[(i, j)] = int(val)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for (i, j), val in items.items():
        rows.setdefault(i, {})[j] = val
        cols.setdefault(j, {})[i] = val

    def drop(i: int, j: int) -> None:
        del rows[i][j]
        if not rows[i]:
            del rows[i]
        del cols[j][i]
        if not cols[j]:
            del cols[j]

    def set_entry(i: int, j: int, val: int) -> None:
        if val:
            rows.setdefault(i, {})[j] = val
            cols.setdefault(j, {})[i] = val
        elif i in rows and j in rows[i]:
            drop(i, j)

    units = 0
    # eliminate +-1 pivots greedily: shortest rows first (lazy heap),
    # breaking ties inside a row by least column degree
    heap: list[tuple[int, int]] = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        rlen, pi = heapq.heappop(heap)
        row = rows.get(pi)
        if row is None or len(row) != rlen:
            continue
        pj = None
        best_deg = None
        for j, val in row.items():
            if val in (1, -1):
                deg = len(cols[j])
                if best_deg is None or deg < best_deg:
                    pj, best_deg = j, deg
        if pj is None:
            continue  # re-enters the heap if the row is ever modified
        pval = row[pj]
        prow = dict(row)
        pcol = dict(cols[pj])
        touched = []
        for i, c in pcol.items():
            if i == pi:
                continue
            f = -c * pval  # c + f*pval = 0 for pval = +-1
            for j, val in prow.items():
                if j == pj:
                    set_entry(i, j, 0)
                else:
                    set_entry(i, j, rows.get(i, {}).get(j, 0) + f * val)
            touched.append(i)
        for j in list(prow):
            set_entry(pi, j, 0)
        for i in list(pcol):
            if i in rows and pj in rows[i]:
                set_entry(i, pj, 0)
        for i in touched:
            if i in rows:
                heapq.heappush(heap, (len(rows[i]), i))
        units += 1

    factors = [1] * units
    if rows:
        live_rows = sorted(rows)
        live_cols = sorted({j for row in rows.values() for j in row})
        ri = {r: i for i, r in enumerate(live_rows)}
        ci = {c: i for i, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for i, row in rows.items():
            for j, val in row.items():
                dense[ri[i]][ci[j]] = val
        core = smith_normal_form(dense)
        factors.extend(abs(d) for d in core.diagonal)
    factors.sort()
    return tuple(factors)
