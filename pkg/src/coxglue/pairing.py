"""Side-pairing codes and gluing data for the reflected union and for
eight abstract copies of the dimension-6 polytope.

A code digit is a sign pattern on the first coordinates, packed base 64;
decoding a code produces the full per-side pairing of the reflected
union.  The eight-copy gluings are 8 x 27 arrays whose entries name a
partner polytope and a power of the order-8 symmetry; developing such a
gluing through the reflected union recovers the code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .coxeter import ORDER8_SYMMETRY, sigma_permutation
from .lorentz import (
    Mat,
    Vec,
    identity,
    lorentz_inverse,
    mat_mul,
    mat_vec,
    reflection_in,
)
from .polytope import QPolytope, build_polytope, build_q

ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz@$"


class PairingError(ValueError):
    pass


class DevelopmentConflict(RuntimeError):
    pass


class CrossSectionError(RuntimeError):
    pass


@dataclass(frozen=True)
class KElement:
    """Diagonal sign flip diag(signs..., 1) on the space coordinates."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (1, -1) for s in self.signs):
            raise PairingError("signs must be +-1")

    @property
    def code_value(self) -> int:
        return sum(((1 - s) // 2) << i for i, s in enumerate(self.signs))

    @property
    def dim(self) -> int:
        return len(self.signs)

    def matrix(self) -> Mat:
        n = len(self.signs)
        diag = self.signs + (1,)
        return tuple(tuple(diag[i] if i == j else 0 for j in range(n + 1))
                     for i in range(n + 1))

    def apply(self, v: Vec) -> Vec:
        return tuple(s * c for s, c in zip(self.signs, v)) + (v[-1],)

    def reverses_orientation(self) -> bool:
        return self.signs.count(-1) % 2 == 1

    @classmethod
    def identity(cls, n: int) -> "KElement":
        return cls((1,) * n)

    @classmethod
    def from_value(cls, value: int, n: int) -> "KElement":
        if not 0 <= value < (1 << n):
            raise PairingError(f"value {value} out of range for {n} signs")
        return cls(tuple(1 - 2 * ((value >> i) & 1) for i in range(n)))


def decode_digit(c: str, dim: int = 6) -> KElement:
    if len(c) != 1 or c not in ALPHABET:
        raise PairingError(f"character {c!r} outside the base-64 alphabet")
    value = ALPHABET.index(c)
    if value >= (1 << dim):
        raise PairingError(f"digit {c!r} exceeds the {dim}-sign range")
    return KElement.from_value(value, dim)


def encode_digit(k: KElement) -> str:
    return ALPHABET[k.code_value]


@dataclass(frozen=True)
class PairingCode:
    """Base-64 code: one digit per side group of the reflected union."""

    dim: int
    digits: str

    def __post_init__(self) -> None:
        want = {6: 21, 5: 11}.get(self.dim)
        if want is None:
            raise PairingError("codes exist in dimensions 5 and 6")
        if len(self.digits) != want:
            raise PairingError(f"expected {want} digits, got {len(self.digits)}")
        for c in self.digits:
            decode_digit(c, self.dim)

    def k_elements(self) -> tuple[KElement, ...]:
        return tuple(decode_digit(c, self.dim) for c in self.digits)

    def __str__(self) -> str:
        return self.digits


def orientability_of_code(code: PairingCode | str, dim: int = 6) -> bool:
    """Orientable iff every digit is an orientation-reversing sign flip."""
    if isinstance(code, str):
        code = PairingCode(dim, code)
    return all(k.reverses_orientation() for k in code.k_elements())


@dataclass(frozen=True)
class QSidePairing:
    """Fully decoded side pairing of the reflected union."""

    q: QPolytope
    code: PairingCode
    partner: tuple[int, ...]
    k_elements: tuple[KElement, ...]
    transforms: tuple[Mat, ...]

    def validate(self) -> None:
        for i, s in enumerate(self.q.sides):
            j = self.partner[i]
            if self.partner[j] != i:
                raise PairingError("partner relation is not an involution")
            gi = self.transforms[i]
            gj = self.transforms[j]
            if mat_mul(gi, gj) != identity(self.q.dim + 1):
                raise PairingError("transforms are not inverse on partners")
        for g in range(self.q.n_groups):
            ks = {self.k_elements[s.index] for s in self.q.group_members(g)}
            if len(ks) != 1:
                raise PairingError("group members carry distinct sign flips")


def decode_q_code(code: PairingCode | str, q: QPolytope | None = None) -> QSidePairing:
    """Assign each side its sign flip, partner and pairing transform."""
    if isinstance(code, str):
        code = PairingCode(6 if len(code) == 21 else 5, code)
    if q is None:
        q = build_q(code.dim)
    if code.dim != q.dim:
        raise PairingError("code length does not match the polytope")
    ks = code.k_elements()
    partner = []
    transforms = []
    k_of_side = []
    for s in q.sides:
        k = ks[s.group]
        k_of_side.append(k)
        image = k.apply(s.normal)
        try:
            j = q.side_index_of_normal(image)
        except KeyError as exc:
            raise PairingError(
                f"sign flip sends side {s.index} outside the side set") from exc
        partner.append(j)
        transforms.append(mat_mul(reflection_in(s.normal), k.matrix()))
    qsp = QSidePairing(q, code, tuple(partner), tuple(k_of_side),
                       tuple(transforms))
    qsp.validate()
    return qsp


# -- eight-copy gluing arrays ------------------------------------------


@lru_cache(maxsize=1)
def standard_context():
    """Shared exact data for the dimension-6 gluings: the polytope, its
    side reflections, the order-8 symmetry powers and side permutation."""
    p6 = build_polytope(6)
    sigma = sigma_permutation(ORDER8_SYMMETRY, p6.normals, p6.vertices)
    reflections = tuple(reflection_in(u) for u in p6.normals)
    powers = [identity(7)]
    for _ in range(7):
        powers.append(mat_mul(ORDER8_SYMMETRY, powers[-1]))
    sigma_pows = [tuple(range(27))]
    for _ in range(7):
        prev = sigma_pows[-1]
        sigma_pows.append(tuple(sigma[x] for x in prev))
    return p6, sigma, reflections, tuple(powers), tuple(sigma_pows)


@dataclass(frozen=True)
class EightPPairing:
    """8 x 27 array of (partner polytope, symmetry power), 0-based."""

    entries: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != 8 or any(len(r) != 27 for r in self.entries):
            raise PairingError("expected an 8 x 27 array")
        for row in self.entries:
            for k, p in row:
                if not (0 <= k < 8 and 0 <= p < 8):
                    raise PairingError(f"entry ({k + 1},{p}) out of range")

    def entry(self, i: int, j: int) -> tuple[int, int]:
        return self.entries[i][j]

    def validate_involution(self) -> None:
        _, _, _, _, sigma_pows = standard_context()
        for i in range(8):
            for j in range(27):
                k, p = self.entries[i][j]
                j2 = sigma_pows[p][j]
                k2, p2 = self.entries[k][j2]
                if k2 != i or (p + p2) % 8 != 0:
                    raise PairingError(
                        f"involution fails at copy {i + 1}, side {j + 1}")

    def transform(self, i: int, j: int) -> Mat:
        """Isometry realizing the gluing of side j of copy i."""
        _, _, reflections, powers, sigma_pows = standard_context()
        k, p = self.entries[i][j]
        return mat_mul(reflections[sigma_pows[p][j]], powers[p])

    def relabeled(self, perm: Sequence[int]) -> "EightPPairing":
        """Renumber the eight copies by perm (old index -> new index)."""
        rows: list[tuple[tuple[int, int], ...]] = [()] * 8
        for i in range(8):
            rows[perm[i]] = tuple((perm[k], p) for k, p in self.entries[i])
        return EightPPairing(tuple(rows))


def parse_8p_pairing(text: str, validate: bool = True) -> EightPPairing:
    """Parse 8 rows of 27 tokens of the form k^p; visual grouping of the
    tokens in triples is accepted and ignored."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        chunks = line.split()
        toks: list[tuple[int, int]] = []
        for chunk in chunks:
            parts = re.findall(r"(\d)\^(\d)", chunk)
            if not parts or "".join(f"{a}^{b}" for a, b in parts) != chunk:
                raise PairingError(f"malformed token chunk {chunk!r}")
            for a, b in parts:
                k, p = int(a), int(b)
                if not 1 <= k <= 8:
                    raise PairingError(f"polytope index {k} out of 1..8")
                if not 0 <= p <= 7:
                    raise PairingError(f"symmetry power {p} out of 0..7")
                toks.append((k - 1, p))
        if len(toks) != 27:
            raise PairingError(f"row has {len(toks)} entries, expected 27")
        rows.append(tuple(toks))
    if len(rows) != 8:
        raise PairingError(f"expected 8 rows, got {len(rows)}")
    arr = EightPPairing(tuple(rows))
    if validate:
        arr.validate_involution()
    return arr


def published_pairing(mid: int) -> EightPPairing:
    from . import tables
    return parse_8p_pairing(tables.pairing_array_text(mid))


# -- development --------------------------------------------------------


@dataclass(frozen=True)
class Development:
    """Placements of the 64 copies filling the reflected union."""

    placements: dict[Mat, tuple[Mat, int]]
    code: PairingCode
    side_digits: tuple[int, ...]


def _copy_key(g: Mat, powers: Sequence[Mat]) -> bytes:
    return min(repr(mat_mul(g, p)).encode() for p in powers)


def _sign_flip_of(g: Mat) -> tuple[int, ...] | None:
    n = len(g)
    signs = []
    for i in range(n):
        for j in range(n):
            e = g[i][j]
            if i == j:
                if e not in (1, -1):
                    return None
                signs.append(e)
            elif e:
                return None
    if signs[-1] != 1:
        return None
    return tuple(signs[:-1])


def develop_to_q(arr: EightPPairing) -> PairingCode:
    return develop(arr).code


def develop(arr: EightPPairing) -> Development:
    """Place copy 1 at the identity and develop the gluing through the
    reflected union; read the code off the boundary walls.

    Raises DevelopmentConflict when two routes place a copy differently or
    the 64 copies are not covered exactly once.
    """
    arr.validate_involution()
    p6, sigma, reflections, powers, sigma_pows = standard_context()
    q6 = build_q(6)
    inv_powers = tuple(lorentz_inverse(p) for p in powers)

    def inside(g: Mat) -> tuple[int, ...] | None:
        for p in inv_powers:
            signs = _sign_flip_of(mat_mul(g, p))
            if signs is not None:
                return signs
        return None

    start = identity(7)
    placements: dict[bytes, tuple[Mat, int, tuple[int, ...]]] = {}
    key0 = _copy_key(start, powers)
    placements[key0] = (start, 0, (1,) * 6)
    frontier = [key0]
    boundary: list[tuple[Mat, int, int, Mat, int]] = []
    while frontier:
        nxt = []
        for key in frontier:
            g, i, _ = placements[key]
            for j in range(27):
                k, p = arr.entry(i, j)
                neighbor = mat_mul(g, mat_mul(reflections[j], inv_powers[p]))
                signs = inside(neighbor)
                nkey = _copy_key(neighbor, powers)
                if signs is None:
                    boundary.append((g, i, j, neighbor, k))
                    if nkey in placements:
                        raise DevelopmentConflict(
                            "outside placement collides with an inside copy")
                    continue
                prev = placements.get(nkey)
                if prev is None:
                    placements[nkey] = (neighbor, k, signs)
                    nxt.append(nkey)
                elif prev[0] != neighbor or prev[1] != k:
                    raise DevelopmentConflict(
                        f"copy reached twice with different charts "
                        f"(abstract {prev[1] + 1} vs {k + 1})")
        frontier = nxt
    if len(placements) != 64:
        raise DevelopmentConflict(
            f"development covered {len(placements)} copies, expected 64")
    per_abstract = [0] * 8
    for _, i, _ in placements.values():
        per_abstract[i] += 1
    if per_abstract != [8] * 8:
        raise DevelopmentConflict(
            f"abstract copies not covered 8 times each: {per_abstract}")

    by_mod2: dict[tuple[int, bytes], Mat] = {}
    for g, i, _ in placements.values():
        key = (i, repr(tuple(tuple(e % 2 for e in row) for row in g)).encode())
        if key in by_mod2:
            raise DevelopmentConflict("two inside charts congruent mod two")
        by_mod2[key] = g

    side_digits: list[int | None] = [None] * len(q6.sides)
    for g, i, j, neighbor, k in boundary:
        wall_normal = mat_vec(g, p6.normals[j])
        try:
            m = q6.side_index_of_normal(wall_normal)
        except KeyError as exc:
            raise DevelopmentConflict(
                "boundary crossing does not line up with a wall") from exc
        key = (k, repr(tuple(tuple(e % 2 for e in row) for row in neighbor)).encode())
        match = by_mod2.get(key)
        if match is None:
            raise DevelopmentConflict(
                "no inside chart matches a boundary crossing mod two")
        f = mat_mul(neighbor, lorentz_inverse(match))
        k_mat = mat_mul(reflections_q(q6)[m], f)
        signs = _sign_flip_of(k_mat)
        if signs is None:
            raise DevelopmentConflict("wall transform is not a sign flip "
                                      "composed with the wall reflection")
        value = sum(((1 - s) // 2) << c for c, s in enumerate(signs))
        if side_digits[m] is None:
            side_digits[m] = value
        elif side_digits[m] != value:
            raise DevelopmentConflict(f"wall {m} received two digits")
    if any(d is None for d in side_digits):
        raise DevelopmentConflict("some walls were never crossed")

    digits = []
    for grp in range(q6.n_groups):
        vals = {side_digits[s.index] for s in q6.group_members(grp)}
        if len(vals) != 1:
            raise DevelopmentConflict(
                f"group {grp} walls received distinct digits")
        digits.append(ALPHABET[vals.pop()])
    code = PairingCode(6, "".join(digits))
    place_map = {g: (g, i) for g, i, _ in placements.values()}
    return Development(place_map, code, tuple(side_digits))


@lru_cache(maxsize=4)
def reflections_q(q: QPolytope) -> tuple[Mat, ...]:
    return tuple(reflection_in(s.normal) for s in q.sides)


# -- restriction to the cross-section ----------------------------------


def _q5_group_map() -> list[int]:
    """For each side group of the dimension-5 union, the matching group of
    the dimension-6 union under the coordinate-1 cross-section."""
    q6 = build_q(6)
    q5 = build_q(5)
    support6 = {}
    for s in q6.sides:
        if s.signs == (1,) * 6:
            u = s.normal
            support6[frozenset(i for i, c in enumerate(u[:-1]) if c)] = s.group
    out = []
    for s in q5.sides:
        if s.signs != (1,) * 5:
            continue
        u = s.normal
        support5 = frozenset(i + 1 for i, c in enumerate(u[:-1]) if c)
        out.append(support6[support5])
    return out


def restrict_code(code: PairingCode | str) -> PairingCode:
    """Restrict a dimension-6 code to the coordinate-1 cross-section."""
    if isinstance(code, str):
        code = PairingCode(6, code)
    if code.dim != 6:
        raise PairingError("only dimension-6 codes restrict")
    qsp = decode_q_code(code)
    restrict_check(qsp)
    ks = code.k_elements()
    digits = []
    for g6 in _q5_group_map():
        digits.append(ALPHABET[ks[g6].code_value >> 1])
    return PairingCode(5, "".join(digits))


def restrict_check(qsp: QSidePairing) -> None:
    """Every pairing transform on a cross-section wall must preserve the
    coordinate-1 hyperplane."""
    e1 = (1,) + (0,) * 6
    for s in qsp.q.sides:
        if s.normal[0] != 0:
            continue
        img = mat_vec(qsp.transforms[s.index], e1)
        if img not in (e1, tuple(-c for c in e1)):
            raise CrossSectionError(
                f"wall {s.index} transform moves the cross-section")


# -- mutation (for negative testing) -------------------------------------


def mutated_pairing(arr: EightPPairing, rng) -> EightPPairing:
    """Rewrite one random entry to a random new value, then repair the
    involution law by re-pairing the displaced slots; the result satisfies
    the involution law but differs from the input."""
    _, _, _, _, sigma_pows = standard_context()
    while True:
        entries = [list(row) for row in arr.entries]
        i, j = rng.randrange(8), rng.randrange(27)
        k, p = entries[i][j]
        k2, p2 = rng.randrange(8), rng.randrange(8)
        if (k2, p2) == (k, p):
            continue
        j2 = sigma_pows[p2][j]
        dangle_a = (k, sigma_pows[p][j])
        k0, p0 = entries[k2][j2]
        dangle_b = (k0, sigma_pows[p0][j2])
        entries[i][j] = (k2, p2)
        entries[k2][j2] = (i, (-p2) % 8)
        dangles = []
        for s in (dangle_a, dangle_b):
            if s not in ((i, j), (k2, j2)) and s not in dangles:
                dangles.append(s)
        if len(dangles) == 2:
            (ia, ja), (ib, jb) = dangles
            q = next((t for t in range(8) if sigma_pows[t][ja] == jb), None)
            if q is None:
                continue
            entries[ia][ja] = (ib, q)
            entries[ib][jb] = (ia, (-q) % 8)
        elif len(dangles) == 1:
            ia, ja = dangles[0]
            q = next((t for t in (0, 4) if sigma_pows[t][ja] == ja), None)
            if q is None:
                continue
            entries[ia][ja] = (ia, q)
        cand = EightPPairing(tuple(tuple(r) for r in entries))
        try:
            cand.validate_involution()
        except PairingError:
            continue
        if cand.entries != arr.entries:
            return cand


# -- restricted search ----------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    solutions: tuple[EightPPairing, ...]
    nodes_used: int
    budget_exhausted: bool
    infeasible: bool
    complete: bool

    def to_json(self) -> dict:
        return {
            "solutions": [[[list(e) for e in row] for row in s.entries]
                          for s in self.solutions],
            "nodes_used": self.nodes_used,
            "budget_exhausted": self.budget_exhausted,
            "infeasible": self.infeasible,
            "complete": self.complete,
        }


class _RollbackCycles:
    """Union-find over tracked face instances with exponent transports,
    orbit size caps, and crossing completion counts; fully undoable."""

    def __init__(self, n_local: int, caps, cpf) -> None:
        n = 8 * n_local
        self.n_local = n_local
        self.parent = list(range(n))
        self.pot = [0] * n
        self.size = [1] * n
        self.asg = [0] * n
        self.caps = [caps[x % n_local] for x in range(n)]
        self.cpf = [cpf[x % n_local] for x in range(n)]
        self.journal: list[tuple] = []

    def mark(self) -> int:
        return len(self.journal)

    def rollback(self, mark: int) -> None:
        while len(self.journal) > mark:
            op = self.journal.pop()
            if op[0] == "u":
                _, child, absorbed = op
                self.parent[child] = child
                self.pot[child] = 0
                self.size[absorbed] -= self.size[child]
                self.asg[absorbed] -= self.asg[child]
            else:
                _, root = op
                self.asg[root] -= 1

    def find(self, x: int) -> tuple[int, int]:
        t = 0
        while self.parent[x] != x:
            t = (self.pot[x] + t) % 8
            x = self.parent[x]
        return x, t

    def _closed_bad(self, root: int) -> bool:
        return (self.asg[root] == self.cpf[root] * self.size[root]
                and self.size[root] != self.caps[root])

    def union(self, x: int, y: int, d: int) -> bool:
        rx, tx = self.find(x)
        ry, ty = self.find(y)
        delta = (d + tx - ty) % 8  # geometry(ry) = delta applied to rx's
        if rx == ry:
            return delta == 0
        if self.size[rx] < self.size[ry]:
            rx, ry, delta = ry, rx, (-delta) % 8
        if self.size[rx] + self.size[ry] > self.caps[rx]:
            return False
        self.parent[ry] = rx
        self.pot[ry] = delta
        self.size[rx] += self.size[ry]
        self.asg[rx] += self.asg[ry]
        self.journal.append(("u", ry, rx))
        return not self._closed_bad(rx)

    def cross(self, x: int) -> bool:
        root, _ = self.find(x)
        self.asg[root] += 1
        self.journal.append(("a", root))
        return not self._closed_bad(root)


@lru_cache(maxsize=1)
def _search_tables():
    from .verify import lattice_context
    lat, vperm, fperm, sides_faces = lattice_context()
    # track the full lattice, lowest dimensions first: small-cap orbits
    # (ridges close in cycles of 4, sides in 2) catch contradictions first
    tracked: dict[int, list[int]] = {d: [] for d in range(6)}
    for f in lat.faces:
        if f.ideal_point or f.dim == 6:
            continue
        tracked[f.dim].append(f.index)
    order = [f for d in range(6) for f in tracked[d]]
    local = {fidx: i for i, fidx in enumerate(order)}
    caps = [2 ** (6 - lat.faces[f].dim) for f in order]
    cpf = [len(lat.faces[f].sides) for f in order]
    perm_local = []
    for p in range(8):
        perm_local.append(tuple(local[fperm[p][f]] for f in order))
    on_side: list[tuple[int, ...]] = []
    for j in range(27):
        # small-cap (high dimension) faces first, to fail fast
        members = sorted((local[f] for f in sides_faces[j]), reverse=True)
        on_side.append(tuple(members))
    return len(order), caps, cpf, tuple(perm_local), tuple(on_side)


def search_pairings(
    fixed: dict[tuple[int, int], tuple[int, int]] | None = None,
    node_budget: int = 10 ** 6,
    time_budget_s: float | None = None,
    max_solutions: int | None = None,
) -> SearchResult:
    """Backtracking search over the symmetry-restricted gluing arrays.

    Assignments respect the involution law by construction; partial
    assignments are pruned through the vertex and edge cycle conditions
    (orbit caps, transport holonomy, and early-closure detection).
    Completed arrays are confirmed with the full properness checker.
    Exhausting the node or time budget is reported, never an error.
    """
    import time as _time

    _, sigma, _, _, sigma_pows = standard_context()
    n_local, caps, cpf, perm_local, on_side = _search_tables()
    cyc = _RollbackCycles(n_local, caps, cpf)
    entries: list[list[tuple[int, int] | None]] = [
        [None] * 27 for _ in range(8)]

    def apply_entry(i: int, j: int, k: int, p: int) -> bool:
        base_i = i * n_local
        base_k = k * n_local
        pl = perm_local[p]
        for f in on_side[j]:
            if not cyc.union(base_i + f, base_k + pl[f], p):
                return False
        for f in on_side[j]:
            if not cyc.cross(base_i + f):
                return False
        return True

    def assign(i: int, j: int, k: int, p: int) -> tuple[bool, list]:
        """Set entry and its involution partner; returns (ok, written)."""
        written = []
        j2 = sigma_pows[p][j]
        pairs = [((i, j), (k, p))]
        if (k, j2) != (i, j):
            pairs.append(((k, j2), (i, (-p) % 8)))
        elif (2 * p) % 8 != 0:
            # a self-paired wall needs an involutive twist power
            return False, written
        for (a, b), val in pairs:
            if entries[a][b] is not None:
                return False, written
            entries[a][b] = val
            written.append((a, b))
        for (a, b), val in pairs:
            if not apply_entry(a, b, *val):
                return False, written
        return True, written

    deadline = None if time_budget_s is None else _time.monotonic() + time_budget_s
    state = {"nodes": 0, "exhausted": False, "infeasible": False}
    solutions: dict[tuple, EightPPairing] = {}

    mark0 = cyc.mark()
    if fixed:
        for (i, j), (k, p) in sorted(fixed.items()):
            if entries[i][j] is not None:
                if entries[i][j] != (k, p):
                    return SearchResult((), 0, False, True, True)
                continue
            ok, _ = assign(i, j, k, p)
            if not ok:
                return SearchResult((), 0, False, True, True)

    slots = [(i, j) for i in range(8) for j in range(27)]
    vert_count = sum(1 for c in cpf if c == 6)
    vert_on_side = [tuple(f for f in on_side[j] if f < vert_count)
                    for j in range(27)]

    def next_slot() -> tuple[int, int] | None:
        """Most-constrained free slot: the one whose wall vertices sit in
        the largest partially-built orbits."""
        best = None
        best_score = -1
        for i, j in slots:
            if entries[i][j] is not None:
                continue
            base = i * n_local
            score = 0
            for f in vert_on_side[j]:
                root, _ = cyc.find(base + f)
                score += cyc.asg[root]
            if score > best_score:
                best, best_score = (i, j), score
        return best

    def dfs() -> bool:
        """Returns False when the search should stop globally."""
        if state["nodes"] >= node_budget or (
                deadline is not None and _time.monotonic() > deadline):
            state["exhausted"] = True
            return False
        slot = next_slot()
        if slot is None:
            arr = EightPPairing(tuple(tuple(row) for row in entries))
            if _confirmed_proper(arr):
                solutions[arr.entries] = arr
                if max_solutions is not None and len(solutions) >= max_solutions:
                    return False
            return True
        i, j = slot
        for k in range(8):
            for p in range(8):
                if state["nodes"] >= node_budget or (
                        deadline is not None and _time.monotonic() > deadline):
                    state["exhausted"] = True
                    return False
                state["nodes"] += 1
                mark = cyc.mark()
                ok, written = assign(i, j, k, p)
                if ok:
                    if not dfs():
                        return False
                for a, b in written:
                    entries[a][b] = None
                cyc.rollback(mark)
        return True

    finished = dfs()
    cyc.rollback(mark0)
    return SearchResult(
        tuple(solutions[key] for key in sorted(solutions)),
        state["nodes"],
        state["exhausted"],
        state["infeasible"],
        finished and not state["exhausted"],
    )


def _confirmed_proper(arr: EightPPairing) -> bool:
    from .verify import face_cycles_proper
    try:
        return face_cycles_proper(arr).proper
    except PairingError:
        return False
