import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from spinnets import bundled_graph_path, load_graph
from spinnets.graphs import Graph
from spinnets.rational import QQi


@pytest.fixture(scope="session")
def theta():
    return load_graph(bundled_graph_path("theta"))


@pytest.fixture(scope="session")
def tet():
    return load_graph(bundled_graph_path("tetrahedron"))


@pytest.fixture(scope="session")
def tetnp():
    return load_graph(bundled_graph_path("tetrahedron_nonplanar"))


@pytest.fixture(scope="session")
def prism():
    return load_graph(bundled_graph_path("prism3"))


def rand_qqi(rng, lim=2):
    return QQi(Fraction(rng.randint(-lim, lim), rng.randint(1, 3)),
               Fraction(rng.randint(-lim, lim), rng.randint(1, 3)))


def mat2_mul(a, b):
    (p, q), (r, s) = a
    (t, u), (v, w) = b
    return ((p * t + q * v, p * u + q * w), (r * t + s * v, r * u + s * w))


def rand_sl2(rng, steps=3):
    """Random exact determinant-1 matrix: product of elementary shears."""
    one, zero = QQi(1), QQi(0)
    m = ((one, zero), (zero, one))
    for _ in range(steps):
        x = rand_qqi(rng)
        if rng.random() < 0.5:
            m = mat2_mul(m, ((one, x), (zero, one)))
        else:
            m = mat2_mul(m, ((one, zero), (x, one)))
    return m


def random_holonomy(graph, seed=0, steps=3):
    from spinnets.graphs import Holonomy

    rng = random.Random(seed)
    return Holonomy(graph, {h: rand_sl2(rng, steps) for h in graph.halfedges}, True)


# rational unit quaternions (w, x, y, z): exact points of SU(2)
_RATIONAL_QUATERNIONS = [
    (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3), Fraction(0)),
    (Fraction(3, 5), Fraction(0), Fraction(4, 5), Fraction(0)),
    (Fraction(2, 7), Fraction(3, 7), Fraction(6, 7), Fraction(0)),
    (Fraction(1, 5), Fraction(2, 5), Fraction(2, 5), Fraction(4, 5)),
    (Fraction(4, 9), Fraction(4, 9), Fraction(7, 9), Fraction(0)),
]


def _quat_mul(p, q):
    a, b, c, d = p
    e, f, g, h = q
    return (a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e)


def _quat_to_su2(q):
    w, x, y, z = q
    return ((QQi(w, -z), QQi(-y, -x)), (QQi(y, -x), QQi(w, z)))


def rand_su2_exact(rng):
    """Exact unitary determinant-1 matrix from random rational quaternions."""
    q = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    for _ in range(3):
        q = _quat_mul(q, rng.choice(_RATIONAL_QUATERNIONS))
    return _quat_to_su2(q)


def random_unitary_holonomy(graph, seed=0):
    from spinnets.graphs import Holonomy

    rng = random.Random(seed)
    return Holonomy(graph, {h: rand_su2_exact(rng) for h in graph.halfedges}, True)


def build_cube_config(pos):
    """Cube graph dual to an octahedron with vertices pos[A0],...,pos[C1]:
    graph vertices are the 8 faces, edge vectors follow a consistent face
    orientation, colors are euclidean edge lengths (floats)."""
    faces = {ijk: (f"A{ijk[0]}", f"B{ijk[1]}", f"C{ijk[2]}")
             for ijk in itertools.product((0, 1), repeat=3)}

    def boundary(ijk):
        X, Y, Z = faces[ijk]
        if sum(ijk) % 2:
            X, Y = Y, X
        return [(X, Y), (Y, Z), (Z, X)]

    vorder = sorted(faces)
    vname = {ijk: "f" + "".join(map(str, ijk)) for ijk in vorder}
    recs, seen = [], set()
    for ijk in vorder:
        for axis in range(3):
            other = tuple(v if a != axis else 1 - v for a, v in enumerate(ijk))
            key = frozenset((ijk, other))
            if key in seen:
                continue
            seen.add(key)
            eid = f"e{axis}" + "".join(str(v) for a, v in enumerate(ijk) if a != axis)
            l, r = (ijk, other) if vorder.index(ijk) < vorder.index(other) else (other, ijk)
            recs.append((eid, l, r, axis))
    vertices = [(vname[ijk], tuple(f"{vname[ijk]}_{a}" for a in range(3))) for ijk in vorder]
    edges = [(e, f"{vname[l]}_{a}", f"{vname[r]}_{a}") for e, l, r, a in recs]
    g = Graph("cube", vertices, edges, [])
    vecs, cols = [], {}
    for eid, lf, rf, axis in recs:
        shared = {faces[lf][a] for a in range(3) if a != axis}
        for X, Y in boundary(lf):
            if {X, Y} == shared:
                d = pos[Y] - pos[X]
        length = float(np.linalg.norm(d))
        vecs.append(d / length)
        cols[eid] = length
    return g, np.array(vecs), cols
