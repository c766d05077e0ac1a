from __future__ import annotations

import pytest

from coxglue.polytope import build_polytope, build_q, face_lattice


@pytest.fixture(scope="session")
def p6():
    return build_polytope(6)


@pytest.fixture(scope="session")
def p6_lattice(p6):
    return face_lattice(p6)


@pytest.fixture(scope="session")
def q6():
    return build_q(6)


@pytest.fixture(scope="session")
def q6_lattice(q6):
    return face_lattice(q6)
