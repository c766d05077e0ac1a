"""Certification of side-pairings: geometric properness through face
cycles, and the algebraic torsion-freeness route through GF(2) column
independence and the order-8 extension obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .coxeter import constants
from .gf2 import Gf2Matrix, columns_independent, gf2_solve
from .lorentz import identity, lorentz_inverse, mat_mul, mat_vec
from .pairing import (
    EightPPairing,
    PairingCode,
    QSidePairing,
    develop,
    orientability_of_code,
    standard_context,
)
from .polytope import FaceLattice, face_lattice


class CertificationError(RuntimeError):
    pass


class InvarianceError(CertificationError):
    """The relation subspace is not preserved by the side permutation."""


# -- transported union-find --------------------------------------------


class TransportUnionFind:
    """Union-find whose edges carry identification transports.

    find(x) returns (root, t) with geometry(x) = t applied to the root's
    geometry; union(x, y, d) asserts geometry(y) = d applied to
    geometry(x) and reports a holonomy conflict when the constraint
    contradicts the existing classes.
    """

    def __init__(self, n: int, compose: Callable, inverse: Callable,
                 ident) -> None:
        self.parent = list(range(n))
        # pot[x]: geometry(x) = pot[x] applied to geometry(parent[x])
        self.pot = [ident] * n
        self.size = [1] * n
        self.compose = compose  # compose(a, b) = "apply b, then a"
        self.inverse = inverse
        self.ident = ident

    def find(self, x: int):
        path = []
        root = x
        while self.parent[root] != root:
            path.append(root)
            root = self.parent[root]
        to_root = {root: self.ident}
        for node in reversed(path):
            to_root[node] = self.compose(self.pot[node],
                                         to_root[self.parent[node]])
        for node in path:
            self.parent[node] = root
            self.pot[node] = to_root[node]
        return root, to_root[x]

    def union(self, x: int, y: int, d) -> bool:
        """Impose geometry(y) = d(geometry(x)); False on holonomy conflict."""
        rx, tx = self.find(x)
        ry, ty = self.find(y)
        want_ty = self.compose(d, tx)
        if rx == ry:
            return ty == want_ty
        if self.size[rx] < self.size[ry]:
            self.parent[rx] = ry
            self.pot[rx] = self.compose(self.inverse(want_ty), ty)
            self.size[ry] += self.size[rx]
        else:
            self.parent[ry] = rx
            self.pot[ry] = self.compose(self.inverse(ty), want_ty)
            self.size[rx] += self.size[ry]
        return True

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            r, _ = self.find(x)
            out.setdefault(r, []).append(x)
        return out


def _exp_compose(a: int, b: int) -> int:
    return (a + b) % 8


def _exp_inverse(a: int) -> int:
    return (-a) % 8


# -- shared exact action of the order-8 symmetry on the face lattice ----


@lru_cache(maxsize=1)
def lattice_context():
    """The dimension-6 lattice with the exact order-8 symmetry action:
    vertex and face permutations for each power, cross-checked between the
    vertex route and the side-set route."""
    p6, sigma, reflections, powers, sigma_pows = standard_context()
    lat = face_lattice(p6)
    vindex = {v: i for i, v in enumerate(p6.vertices)}
    vperm = []
    for p in range(8):
        vperm.append(tuple(vindex[mat_vec(powers[p], v)]
                           for v in p6.vertices))
    fperm = []
    for p in range(8):
        perm = []
        for f in lat.faces:
            mask = 0
            m = f.vertex_mask
            while m:
                low = m & -m
                mask |= 1 << vperm[p][low.bit_length() - 1]
                m ^= low
            g = lat.faces[lat.by_vertex_mask[mask]]
            if frozenset(sigma_pows[p][s] for s in f.sides) != g.sides:
                raise CertificationError(
                    "vertex and side transport routes disagree")
            perm.append(g.index)
        fperm.append(tuple(perm))
    sides_faces = [[] for _ in range(27)]
    for f in lat.faces:
        if f.ideal_point or f.dim == 6:
            continue
        for s in f.sides:
            sides_faces[s].append(f.index)
    return lat, tuple(vperm), tuple(fperm), tuple(tuple(x) for x in sides_faces)


# -- properness ----------------------------------------------------------


@dataclass(frozen=True)
class PropernessCertificate:
    proper: bool
    dims: dict[int, dict[str, int]]
    violation: dict | None = None

    def to_json(self) -> dict:
        return {"proper": self.proper,
                "dims": {str(k): v for k, v in sorted(self.dims.items())},
                "violation": self.violation}


def face_cycles_proper(
    pairing: EightPPairing | QSidePairing,
    lattice: FaceLattice | None = None,
) -> PropernessCertificate:
    """Trace every face orbit through the exact side-pairing isometries;
    proper iff each k-face class has exactly 2^(n-k) members and all
    transports around cycles are trivial."""
    if isinstance(pairing, EightPPairing):
        return _cycles_eight(pairing)
    return _cycles_q(pairing, lattice)


def _cycles_eight(arr: EightPPairing) -> PropernessCertificate:
    arr.validate_involution()
    lat, vperm, fperm, sides_faces = lattice_context()
    nf = len(lat.faces)
    uf = TransportUnionFind(8 * nf, _exp_compose, _exp_inverse, 0)
    violation = None
    for i in range(8):
        for j in range(27):
            k, p = arr.entry(i, j)
            for fidx in sides_faces[j]:
                a = i * nf + fidx
                b = k * nf + fperm[p][fidx]
                if not uf.union(a, b, p):
                    violation = {"kind": "holonomy", "copy": i + 1,
                                 "side": j + 1, "face_dim": lat.faces[fidx].dim}
                    break
            if violation:
                break
        if violation:
            break
    return _cycle_report(uf, lat, 8, violation)


def _cycles_q(qsp: QSidePairing, lattice: FaceLattice | None) -> PropernessCertificate:
    lat = lattice if lattice is not None else face_lattice(qsp.q)
    poly = lat.polytope
    n = poly.dim
    vindex = {v: i for i, v in enumerate(poly.vertices)}
    nf = len(lat.faces)
    uf = TransportUnionFind(
        nf, lambda a, b: mat_mul(a, b), lorentz_inverse, identity(n + 1))
    sides_faces: list[list[int]] = [[] for _ in range(len(poly.normals))]
    for f in lat.faces:
        if f.ideal_point or f.dim == n:
            continue
        for s in f.sides:
            sides_faces[s].append(f.index)
    inc = poly.incidence_masks()
    violation = None
    for m, faces in enumerate(sides_faces):
        # points of side m are carried to the partner side by the inverse
        g = qsp.transforms[qsp.partner[m]]
        gv: dict[int, int] = {}
        mm = inc[m]
        while mm:
            low = mm & -mm
            vid = low.bit_length() - 1
            image = vindex.get(mat_vec(g, poly.vertices[vid]))
            if image is None:
                raise CertificationError(
                    "pairing map does not carry a side vertex to a vertex")
            gv[vid] = image
            mm ^= low
        for fidx in faces:
            f = lat.faces[fidx]
            mask = 0
            mm = f.vertex_mask
            while mm:
                low = mm & -mm
                mask |= 1 << gv[low.bit_length() - 1]
                mm ^= low
            target = lat.by_vertex_mask.get(mask)
            if target is None:
                raise CertificationError("pairing map does not carry a face "
                                         "to a face")
            if not uf.union(fidx, target, g):
                violation = {"kind": "holonomy", "side": m + 1,
                             "face_dim": f.dim}
                break
        if violation:
            break
    return _cycle_report(uf, lat, 1, violation)


def _cycle_report(uf: TransportUnionFind, lat: FaceLattice, copies: int,
                  violation: dict | None) -> PropernessCertificate:
    n = lat.polytope.dim
    nf = len(lat.faces)
    dims: dict[int, dict[str, int]] = {
        k: {"faces": 0, "orbits": 0, "expected_cycle": 2 ** (n - k)}
        for k in range(n)}
    if violation is None:
        roots: dict[int, int] = {}
        root_dim: dict[int, int] = {}
        for i in range(copies):
            for f in lat.faces:
                if f.ideal_point or f.dim == n:
                    continue
                x = i * nf + f.index
                r, _ = uf.find(x)
                roots[r] = roots.get(r, 0) + 1
                root_dim[r] = f.dim
                dims[f.dim]["faces"] += 1
        for r, size in roots.items():
            k = root_dim[r]
            dims[k]["orbits"] += 1
            if size != 2 ** (n - k) and violation is None:
                member = next(
                    (i, f.index) for i in range(copies) for f in lat.faces
                    if not f.ideal_point and f.dim != n
                    and uf.find(i * nf + f.index)[0] == r)
                violation = {"kind": "cycle_length", "face_dim": k,
                             "cycle_length": size,
                             "expected": 2 ** (n - k),
                             "witness_copy": member[0] + 1,
                             "witness_face_sides":
                                 sorted(s + 1 for s in lat.faces[member[1]].sides)}
    return PropernessCertificate(violation is None, dims, violation)


# -- algebraic certificates ----------------------------------------------


@dataclass(frozen=True)
class CodeMatrix:
    """Mod-two abelianization data of a 21-digit code: six identity
    columns for the coordinate walls, then the digit bit columns."""

    matrix: Gf2Matrix
    code: PairingCode

    def column_bits(self, j: int) -> int:
        return self.matrix.column(j)


def build_code_matrix(code: PairingCode | str) -> CodeMatrix:
    if isinstance(code, str):
        code = PairingCode(6, code)
    if code.dim != 6:
        raise CertificationError("code matrix needs a 21-digit code")
    cols: list[list[int]] = []
    for i in range(6):
        cols.append([1 if r == i else 0 for r in range(6)])
    for k in code.k_elements():
        v = k.code_value
        cols.append([(v >> r) & 1 for r in range(6)])
    return CodeMatrix(Gf2Matrix.from_columns(cols, 6), code)


@dataclass(frozen=True)
class TorsionCertificate:
    h_torsion_free: bool
    conditions_checked: int
    mode: str
    failures: tuple[tuple[int, ...], ...]
    representative_sets: tuple[frozenset[int], ...]
    extension: str | None = None
    sigma_star: Gf2Matrix | None = None

    def to_json(self) -> dict:
        return {
            "h_torsion_free": self.h_torsion_free,
            "conditions_checked": self.conditions_checked,
            "mode": self.mode,
            "failures": [sorted(c + 1 for c in f) for f in self.failures],
            "extension": self.extension,
        }


def _vertex_edge_sets(lat: FaceLattice) -> tuple[list[tuple[int, ...]],
                                                 list[tuple[int, ...]]]:
    verts = []
    for f in lat.faces:
        if f.dim == 0 and not f.ideal_point:
            verts.append((f.index, tuple(sorted(f.sides))))
    edges = []
    for f in lat.faces:
        if f.dim == 1 and f.edge_kind == "line":
            edges.append((f.index, tuple(sorted(f.sides))))
    verts.sort()
    edges.sort()
    return verts, edges


def torsion_free_H(cmx: CodeMatrix, mode: str = "full") -> TorsionCertificate:
    """Check GF(2) independence of the wall columns meeting at each actual
    vertex (six columns) and along each two-ended ideal edge (five
    columns); in reduced mode only on representatives of the free order-8
    symmetry orbits."""
    lat, vperm, fperm, _ = lattice_context()
    verts, edges = _vertex_edge_sets(lat)
    if mode == "reduced":
        items = _orbit_representatives(lat, fperm, verts, edges)
    elif mode == "full":
        items = [sides for _, sides in verts] + [sides for _, sides in edges]
    else:
        raise ValueError("mode must be 'full' or 'reduced'")
    failures = []
    for sides in items:
        if not columns_independent(cmx.matrix, sides):
            failures.append(sides)
    return TorsionCertificate(
        h_torsion_free=not failures,
        conditions_checked=len(items),
        mode=mode,
        failures=tuple(failures),
        representative_sets=tuple(frozenset(s) for s in items))


def _orbit_representatives(lat, fperm, verts, edges) -> list[tuple[int, ...]]:
    reps: list[tuple[int, ...]] = []
    for pool, expected in ((verts, 9), (edges, 27)):
        sides_of = dict(pool)
        seen: set[int] = set()
        count = 0
        for fidx, _ in pool:
            if fidx in seen:
                continue
            orbit = {fidx}
            x = fidx
            while True:
                x = fperm[1][x]
                if x == fidx:
                    break
                orbit.add(x)
            if len(orbit) != 8:
                raise CertificationError(
                    "order-8 symmetry does not act freely; the reduced "
                    "check is unavailable")
            seen.update(orbit)
            rep = min(orbit, key=lambda f: tuple(lat.vertex_ids(lat.faces[f])))
            reps.append(sides_of[rep])
            count += 1
        if count != expected:
            raise CertificationError("unexpected orbit count")
    return reps


def pair_space_action(cmx: CodeMatrix, sigma: Sequence[int] | None = None
                      ) -> Gf2Matrix:
    """Matrix, on the 21 relator images, of the automorphism induced by
    the order-8 side permutation; raises InvarianceError if the span is
    not preserved."""
    if sigma is None:
        sigma = standard_context()[1]
    w = [cmx.column_bits(j) for j in range(27)]
    basis = [w[j] | (1 << j) for j in range(6, 27)]

    def act(x: int) -> int:
        out = 0
        m = x
        while m:
            low = m & -m
            out |= 1 << sigma[low.bit_length() - 1]
            m ^= low
        return out

    cols = []
    for j in range(21):
        y = act(basis[j])
        coeff = y >> 6
        total = 0
        for r in range(21):
            if (coeff >> r) & 1:
                total ^= basis[r]
        if total != y:
            raise InvarianceError(
                f"image of relator {j + 7} leaves the relator span")
        cols.append([(coeff >> r) & 1 for r in range(21)])
    return Gf2Matrix.from_columns(cols, 21)


def extension_torsion_certificate(
    cmx: CodeMatrix,
    action: Gf2Matrix | None = None,
) -> dict:
    """Decide whether the order-8 extension has an order-two obstruction:
    certified when v + action^4(v) = (orbit sum of wall two) has no
    solution among the relator images."""
    sigma = standard_context()[1]
    if action is None:
        action = pair_space_action(cmx, sigma)
    target = 0
    s = 1  # wall with index 2 in one-based terms
    for _ in range(8):
        target ^= 1 << s
        s = sigma[s]
    w = [cmx.column_bits(j) for j in range(27)]
    basis = [w[j] | (1 << j) for j in range(6, 27)]
    coeff = target >> 6
    total = 0
    for r in range(21):
        if (coeff >> r) & 1:
            total ^= basis[r]
    if total != target:
        return {"status": "certified", "reason": "target outside relator span",
                "solution": None, "target_coefficients": None}
    m = action.power(4) + Gf2Matrix.identity(21)
    sol = gf2_solve(m, coeff)
    if sol.consistent:
        return {"status": "inconclusive",
                "reason": "obstruction equation is solvable",
                "solution": sorted(j + 7 for j in sol.solution_support()),
                "target_coefficients": sorted(j + 7 for j in range(21)
                                              if (coeff >> j) & 1)}
    return {"status": "certified", "reason": "obstruction equation has no solution",
            "solution": None,
            "target_coefficients": sorted(j + 7 for j in range(21)
                                          if (coeff >> j) & 1)}


# -- combined certificate -------------------------------------------------


@dataclass(frozen=True)
class ManifoldCertificate:
    code: str
    proper: PropernessCertificate
    orientable: bool
    torsion_full: TorsionCertificate
    torsion_reduced: TorsionCertificate
    extension: dict
    euler_characteristic: Fraction
    index_chain: dict

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "proper": self.proper.to_json(),
            "orientable": self.orientable,
            "torsion_full": self.torsion_full.to_json(),
            "torsion_reduced": self.torsion_reduced.to_json(),
            "extension": self.extension,
            "euler_characteristic": str(self.euler_characteristic),
            "index_chain": {k: str(v) for k, v in self.index_chain.items()},
        }


def certify_manifold(
    arr: EightPPairing,
    code: PairingCode | str | None = None,
) -> ManifoldCertificate:
    """Run both certification routes on an eight-copy gluing.

    When a code is supplied the development must reproduce it exactly.
    """
    dev = develop(arr)
    if code is not None:
        want = code.digits if isinstance(code, PairingCode) else code
        if dev.code.digits != want:
            raise CertificationError(
                f"development yields {dev.code.digits}, record says {want}")
    proper = face_cycles_proper(arr)
    cmx = build_code_matrix(dev.code)
    full = torsion_free_H(cmx, "full")
    reduced = torsion_free_H(cmx, "reduced")
    try:
        action = pair_space_action(cmx)
        ext = extension_torsion_certificate(cmx, action)
    except InvarianceError as exc:
        action = None
        ext = {"status": "inconclusive", "reason": str(exc),
               "solution": None, "target_coefficients": None}
    reduced = replace(reduced, extension=ext["status"], sigma_star=action)
    c6 = constants(6)
    chi_congruence = c6.euler_char_gamma2
    chi_h = chi_congruence * 64
    chi = chi_h / 8
    chain = {
        "euler_full_group": c6.euler_char_full,
        "congruence_index": c6.index_gamma2,
        "euler_congruence": chi_congruence,
        "wall_group_index": 64,
        "euler_wall_group": chi_h,
        "deck_order": 8,
        "euler_manifold_group": chi,
    }
    return ManifoldCertificate(
        code=dev.code.digits,
        proper=proper,
        orientable=orientability_of_code(dev.code),
        torsion_full=full,
        torsion_reduced=reduced,
        extension=ext,
        euler_characteristic=chi,
        index_chain=chain,
    )
