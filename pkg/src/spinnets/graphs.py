"""Trivalent graphs with planar presentations, colorings and holonomies.

A presentation fixes: the left-to-right vertex order, the order of the three
half-edges at each vertex (a rotation of the clockwise cyclic order), a
left/right half-edge per edge, and the set of crossing edge pairs.  All sign
conventions downstream are relative to this data, which is part of the input
format and never inferred.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import AdmissibilityError, InputError
from .rational import QQi, parse_exact

__all__ = [
    "Graph",
    "Holonomy",
    "load_graph",
    "load_coloring",
    "load_holonomy",
    "is_admissible",
    "internal_coloring",
    "crossing_sign",
    "admissible_colorings",
]


class Graph:
    """Immutable trivalent graph with a planar presentation."""

    def __init__(self, name, vertices, edges, crossings):
        # vertices: list of (vertex_id, (h0, h1, h2)); edges: list of
        # (edge_id, left_halfedge, right_halfedge); crossings: iterable of
        # 2-element edge-id collections.
        self.name = name
        self.vertices = tuple((v, tuple(hs)) for v, hs in vertices)
        self.edges = tuple((e, l, r) for e, l, r in edges)
        self.crossings = frozenset(frozenset(p) for p in crossings)
        self._validate()
        self._index()

    # -- construction ----------------------------------------------------
    @classmethod
    def from_obj(cls, obj):
        try:
            name = obj.get("name", "graph")
            vertices = [(v["id"], tuple(v["halfedges"])) for v in obj["vertices"]]
            edges = [(e["id"], e["left"], e["right"]) for e in obj["edges"]]
            crossings = obj.get("crossings", [])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph object: missing {exc}") from exc
        return cls(name, vertices, edges, crossings)

    def to_obj(self):
        return {
            "name": self.name,
            "vertices": [{"id": v, "halfedges": list(hs)} for v, hs in self.vertices],
            "edges": [{"id": e, "left": l, "right": r} for e, l, r in self.edges],
            "crossings": sorted(sorted(p) for p in self.crossings),
        }

    def _validate(self):
        seen_v = set()
        in_vertex = {}
        for v, hs in self.vertices:
            if v in seen_v:
                raise InputError(f"duplicate vertex id {v!r}")
            seen_v.add(v)
            if len(hs) != 3:
                raise InputError(f"vertex {v!r} must carry exactly 3 half-edges")
            for h in hs:
                if h in in_vertex:
                    raise InputError(f"half-edge {h!r} appears at two vertex slots")
                in_vertex[h] = v
        seen_e = set()
        in_edge = set()
        for e, l, r in self.edges:
            if e in seen_e:
                raise InputError(f"duplicate edge id {e!r}")
            seen_e.add(e)
            for h in (l, r):
                if h not in in_vertex:
                    raise InputError(f"edge {e!r} references unknown half-edge {h!r}")
                if h in in_edge:
                    raise InputError(f"half-edge {h!r} appears in two edges")
                in_edge.add(h)
        if in_edge != set(in_vertex):
            missing = set(in_vertex) - in_edge
            raise InputError(f"half-edges not covered by edges: {sorted(missing)}")
        nv, ne = len(self.vertices), len(self.edges)
        if 3 * nv != 2 * ne or nv % 2:
            raise InputError(f"counts violate #V=2N, #E=3N: V={nv}, E={ne}")
        for pair in self.crossings:
            if len(pair) != 2 or not pair <= seen_e:
                raise InputError(f"bad crossing pair {sorted(pair)}")
        # left half-edge must sit at the earlier vertex (loops: earlier slot)
        vpos = {v: i for i, (v, _) in enumerate(self.vertices)}
        hslot = {}
        for i, (v, hs) in enumerate(self.vertices):
            for j, h in enumerate(hs):
                hslot[h] = 3 * i + j
        for e, l, r in self.edges:
            if hslot[l] > hslot[r]:
                raise InputError(f"edge {e!r}: left half-edge is right of its partner")
        # connectivity
        parent = {v: v for v, _ in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, l, r in self.edges:
            a, b = find(in_vertex[l]), find(in_vertex[r])
            if a != b:
                parent[a] = b
        roots = {find(v) for v, _ in self.vertices}
        if len(roots) != 1:
            raise InputError("graph is not connected")
        self._in_vertex = in_vertex
        self._vpos = vpos
        self._hslot = hslot

    def _index(self):
        self.halfedges = tuple(h for _, hs in self.vertices for h in hs)
        self.halfedge_slot = self._hslot
        self.vertex_of = dict(self._in_vertex)
        self.edge_ids = tuple(e for e, _, _ in self.edges)
        self.edge_by_id = {e: (l, r) for e, l, r in self.edges}
        self.edge_of = {}
        for e, l, r in self.edges:
            self.edge_of[l] = (e, "left")
            self.edge_of[r] = (e, "right")
        # angles: per vertex, half-edge position pairs (0,1), (1,2), (0,2)
        angles = []
        for v, hs in self.vertices:
            for (i, j) in ((0, 1), (1, 2), (0, 2)):
                angles.append((f"{v}:{i}{j}", v, (i, j), (hs[i], hs[j])))
        self.angles = tuple(angles)
        self.angle_ids = tuple(a[0] for a in angles)
        self.N = len(self.edges) - len(self.vertices)

    # -- queries -----------------------------------------------------------
    def vertex_halfedges(self, v):
        for vv, hs in self.vertices:
            if vv == v:
                return hs
        raise InputError(f"unknown vertex {v!r}")

    def vertex_edge_ids(self, v):
        return tuple(self.edge_of[h][0] for h in self.vertex_halfedges(v))

    def angles_at_halfedge(self, h):
        """Ids of the two angles containing half-edge h."""
        v = self.vertex_of[h]
        hs = self.vertex_halfedges(v)
        p = hs.index(h)
        return tuple(f"{v}:{i}{j}" for (i, j) in ((0, 1), (1, 2), (0, 2)) if p in (i, j))

    def interleaving_crossings(self):
        """Canonical crossing set: arcs whose slot endpoints interleave."""
        arcs = {e: tuple(sorted((self.halfedge_slot[l], self.halfedge_slot[r])))
                for e, l, r in self.edges}
        out = set()
        ids = self.edge_ids
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                (a0, a1), (b0, b1) = arcs[ids[i]], arcs[ids[j]]
                if a0 > b0:
                    (a0, a1), (b0, b1) = (b0, b1), (a0, a1)
                if a0 < b0 < a1 < b1:
                    out.add(frozenset((ids[i], ids[j])))
        return frozenset(out)

    def __repr__(self):
        return f"Graph({self.name!r}, V={len(self.vertices)}, E={len(self.edges)})"


# ---------------------------------------------------------------------------
# colorings
# ---------------------------------------------------------------------------

def _vertex_colors(graph, coloring, v, hs):
    cols = []
    for h in hs:
        e = graph.edge_of[h][0]
        if e not in coloring:
            raise InputError(f"coloring misses edge {e!r}")
        cols.append(coloring[e])
    return cols


def is_admissible(graph: Graph, coloring: dict) -> bool:
    """Parity and all three triangle inequalities at every vertex."""
    for v, hs in graph.vertices:
        a, b, c = _vertex_colors(graph, coloring, v, hs)
        if (a + b + c) % 2:
            return False
        if a > b + c or b > a + c or c > a + b:
            return False
    return True


def internal_coloring(graph: Graph, coloring: dict) -> dict:
    """Angle coloring {angle_id: (c_i + c_j - c_k) / 2}."""
    out = {}
    for v, hs in graph.vertices:
        a, b, c = _vertex_colors(graph, coloring, v, hs)
        vals = {(0, 1): (a + b - c), (1, 2): (b + c - a), (0, 2): (a + c - b)}
        for (i, j), t in vals.items():
            if t < 0 or t % 2:
                raise AdmissibilityError(
                    f"angle {v}:{i}{j} would get color {t}/2; coloring not admissible")
            out[f"{v}:{i}{j}"] = t // 2
    return out


def crossing_sign(graph: Graph, coloring: dict) -> int:
    """Product over crossing pairs of (-1)^(c_e * c_f)."""
    s = 1
    for pair in graph.crossings:
        e, f = tuple(pair)
        if (coloring[e] * coloring[f]) % 2:
            s = -s
    return s


def admissible_colorings(graph: Graph, max_color=None, max_total=None):
    """Yield admissible colorings with per-edge bound and/or total-sum bound."""
    if max_color is None and max_total is None:
        raise InputError("need max_color or max_total")
    cap = max_color if max_color is not None else max_total
    edges = graph.edge_ids
    # vertex constraints as (edge indices at vertex)
    vtx = []
    eidx = {e: i for i, e in enumerate(edges)}
    for v, hs in graph.vertices:
        vtx.append(tuple(eidx[graph.edge_of[h][0]] for h in hs))
    cols = [0] * len(edges)

    def ok_partial(n_set):
        for tri in vtx:
            if all(i < n_set for i in tri):
                a, b, c = (cols[i] for i in tri)
                if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
                    return False
        return True

    def rec(i, total):
        if i == len(edges):
            yield {e: cols[j] for j, e in enumerate(edges)}
            return
        top = cap
        if max_total is not None:
            top = min(top, max_total - total)
        for c in range(top + 1):
            cols[i] = c
            if ok_partial(i + 1):
                yield from rec(i + 1, total + c)
        cols[i] = 0

    yield from rec(0, 0)


# ---------------------------------------------------------------------------
# holonomies
# ---------------------------------------------------------------------------

def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


class Holonomy:
    """Per-half-edge 2x2 determinant-1 matrices, exact or floating."""

    def __init__(self, graph: Graph, entries: dict, exact: bool):
        self.exact = exact
        mats = {}
        for h in graph.halfedges:
            if h not in entries:
                raise InputError(f"holonomy misses half-edge {h!r}")
            m = entries[h]
            rows = tuple(tuple(row) for row in m)
            if len(rows) != 2 or any(len(r) != 2 for r in rows):
                raise InputError(f"holonomy at {h!r} is not a 2x2 matrix")
            d = _det2(rows)
            if exact:
                if d != QQi(1):
                    raise InputError(f"holonomy at {h!r} has determinant {d!r}, not 1")
            else:
                if abs(complex(d) - 1.0) > 1e-12:
                    raise InputError(f"holonomy at {h!r} has |det-1| > 1e-12")
            mats[h] = rows
        self.entries = mats

    @classmethod
    def trivial(cls, graph: Graph):
        one, zero = QQi(1), QQi(0)
        return cls(graph, {h: ((one, zero), (zero, one)) for h in graph.halfedges}, True)

    @classmethod
    def diagonal(cls, graph: Graph, t: dict):
        """Diagonal exact holonomy diag(t_h, 1/t_h) from nonzero rationals."""
        entries = {}
        zero = QQi(0)
        for h in graph.halfedges:
            if h not in t:
                raise InputError(f"t misses half-edge {h!r}")
            th = Fraction(t[h])
            if not th:
                raise InputError(f"t[{h!r}] must be nonzero")
            entries[h] = ((QQi(th), zero), (zero, QQi(1 / th)))
        return cls(graph, entries, True)

    @classmethod
    def from_obj(cls, graph: Graph, obj):
        exact = True
        parsed = {}
        for h, m in obj.items():
            rows = []
            for row in m:
                cells = []
                for s in row:
                    if isinstance(s, bool):
                        raise InputError(f"bad scalar {s!r} in holonomy at {h!r}")
                    if isinstance(s, (int, str)):
                        cells.append(parse_exact(s))
                    elif isinstance(s, float):
                        exact = False
                        cells.append(complex(s))
                    elif isinstance(s, (list, tuple)) and len(s) == 2:
                        exact = False
                        cells.append(complex(float(s[0]), float(s[1])))
                    else:
                        raise InputError(f"bad scalar {s!r} in holonomy at {h!r}")
                rows.append(tuple(cells))
            parsed[h] = tuple(rows)
        if not exact:
            parsed = {h: tuple(tuple(complex(x) for x in row) for row in m)
                      for h, m in parsed.items()}
        return cls(graph, parsed, exact)

    def matrix(self, h):
        return self.entries[h]

    def inverse_matrix(self, h):
        # determinant is 1, so the inverse is the adjugate
        (a, b), (c, d) = self.entries[h]
        return ((d, -b), (-c, a))

    def is_trivial(self):
        if not self.exact:
            return False
        one, zero = QQi(1), QQi(0)
        return all(m == ((one, zero), (zero, one)) for m in self.entries.values())

    def to_float(self, graph: Graph):
        if not self.exact:
            return self
        ent = {h: tuple(tuple(complex(x) for x in row) for row in m)
               for h, m in self.entries.items()}
        return Holonomy(graph, ent, False)


# ---------------------------------------------------------------------------
# file loading
# ---------------------------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_graph(path) -> Graph:
    return Graph.from_obj(_load_json(path))


def load_coloring(path, graph: Graph | None = None) -> dict:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: coloring must be an object {{edge: int}}")
    out = {}
    for e, c in obj.items():
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise InputError(f"{path}: color of {e!r} must be a non-negative integer")
        out[e] = c
    if graph is not None:
        missing = set(graph.edge_ids) - set(out)
        if missing:
            raise InputError(f"{path}: coloring misses edges {sorted(missing)}")
    return out


def load_holonomy(path, graph: Graph) -> Holonomy:
    return Holonomy.from_obj(graph, _load_json(path))
