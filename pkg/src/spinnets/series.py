"""Generating series of renormalized spin-network evaluations.

Four routes to the same series and its determinant identities:
  * quadratic-form determinant (build_pq + series_Z),
  * cycle-subgraph polynomial (westbury_polynomial),
  * curve/dimer expansion of the half-edge matrix for diagonal holonomies
    (abelian_curve_sum),
  * dimer/Pfaffian expansion (pfaffian_dimer_sum),
plus the sign-fix operators that upgrade the determinant series to the true
generating series on presentations with crossings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, RegimeError
from .evaluator import eval_spin_network, renormalize
from .graphs import Graph, Holonomy, admissible_colorings, internal_coloring
from .polyring import MPoly, Namespace, TruncSeries, det_poly, inv_sqrt_series
from .rational import QQi

__all__ = [
    "PQMatrices",
    "build_pq",
    "series_Z",
    "westbury_polynomial",
    "abelian_curve_sum",
    "pfaffian_dimer_sum",
    "nonplanar_fix",
    "compare_with_evaluations",
]

_I = QQi(0, 1)


def _zvar(h):
    return "z@" + h


def _wvar(h):
    return "w@" + h


@dataclass(frozen=True)
class PQMatrices:
    """Canonical-basis matrix of the quadratic form, split into the constant
    part P (edge pairings) and the X-linear part Q (holonomy-twisted angle
    pairings).  Basis: (z_h, w_h) per half-edge, in presentation order."""

    ns: Namespace            # angle-variable namespace
    basis: tuple             # variable label per row/column
    p: dict                  # {row: {col: QQi}}
    q: dict                  # {row: {col: MPoly}}

    def full(self):
        """Dense list-of-lists P + Q over MPoly (det_poly input)."""
        n = len(self.basis)
        idx = {b: i for i, b in enumerate(self.basis)}
        rows = [[MPoly.zero(self.ns) for _ in range(n)] for _ in range(n)]
        for r, cols in self.p.items():
            for c, v in cols.items():
                rows[idx[r]][idx[c]] = rows[idx[r]][idx[c]] + MPoly.const(self.ns, v)
        for r, cols in self.q.items():
            for c, v in cols.items():
                rows[idx[r]][idx[c]] = rows[idx[r]][idx[c]] + v
        return rows


def build_pq(graph: Graph, holonomy: Holonomy | None = None) -> PQMatrices:
    if holonomy is None:
        holonomy = Holonomy.trivial(graph)
    if not holonomy.exact:
        raise RegimeError("build_pq needs an exact-regime holonomy")
    ns = Namespace(graph.angle_ids)
    basis = []
    for h in graph.halfedges:
        basis.append(_zvar(h))
        basis.append(_wvar(h))

    p: dict = {b: {} for b in basis}

    def padd(r, c, v):
        cur = p[r].get(c)
        p[r][c] = v if cur is None else cur + v

    for e, l, r in graph.edges:
        padd(_zvar(l), _wvar(r), _I)
        padd(_wvar(r), _zvar(l), _I)
        padd(_zvar(r), _wvar(l), -_I)
        padd(_wvar(l), _zvar(r), -_I)

    q: dict = {b: {} for b in basis}

    def qadd(r, c, poly):
        cur = q[r].get(c)
        q[r][c] = poly if cur is None else cur + poly

    for aid, v, (i, j), (g, h) in graph.angles:
        (a, b), (c, d) = holonomy.inverse_matrix(g)
        (a2, b2), (c2, d2) = holonomy.inverse_matrix(h)
        coeffs = {
            (_zvar(g), _zvar(h)): _I * (a * c2 - a2 * c),
            (_zvar(g), _wvar(h)): _I * (a * d2 - b2 * c),
            (_wvar(g), _zvar(h)): _I * (b * c2 - a2 * d),
            (_wvar(g), _wvar(h)): _I * (b * d2 - b2 * d),
        }
        for (rr, cc), val in coeffs.items():
            if not val:
                continue
            mono = MPoly.var(ns, aid, val)
            qadd(rr, cc, mono)
            qadd(cc, rr, mono)

    p = {r: {c: v for c, v in cols.items() if v} for r, cols in p.items()}
    q = {r: {c: v for c, v in cols.items() if not v.is_zero()} for r, cols in q.items()}
    return PQMatrices(ns, tuple(basis), p, q)


# ---------------------------------------------------------------------------
# determinant of P + Q, truncated: det(P+Q) = det(I - P·Q) since P^{-1} = -P
# and det(P) = 1; log det = -sum tr((PQ)^m)/m is degree-m homogeneous.
# ---------------------------------------------------------------------------

def _sparse_matmul(a, b, ns, max_degree):
    out: dict = {}
    for i, row in a.items():
        acc: dict = {}
        for k, aik in row.items():
            brow = b.get(k)
            if not brow:
                continue
            for j, bkj in brow.items():
                prod = aik.mul_trunc(bkj, max_degree)
                if prod.is_zero():
                    continue
                cur = acc.get(j)
                acc[j] = prod if cur is None else cur + prod
        acc = {j: v for j, v in acc.items() if not v.is_zero()}
        if acc:
            out[i] = acc
    return out


def _trace(a, ns):
    t = MPoly.zero(ns)
    for i, row in a.items():
        v = row.get(i)
        if v is not None:
            t = t + v
    return t


def _pair_trace(a, b, ns, max_degree):
    t = MPoly.zero(ns)
    for i, row in a.items():
        for j, aij in row.items():
            bji = b.get(j, {}).get(i)
            if bji is not None:
                t = t + aij.mul_trunc(bji, max_degree)
    return t


def truncated_det(pq: PQMatrices, max_degree: int) -> MPoly:
    """det(P + Q) with monomials of degree > max_degree dropped."""
    ns = pq.ns
    # B = P·Q as sparse dict-of-dicts
    b: dict = {}
    for r, cols in pq.p.items():
        acc: dict = {}
        for k, s in cols.items():
            qrow = pq.q.get(k)
            if not qrow:
                continue
            for j, poly in qrow.items():
                term = poly.scalar_mul(s)
                cur = acc.get(j)
                acc[j] = term if cur is None else cur + term
        acc = {j: v for j, v in acc.items() if not v.is_zero()}
        if acc:
            b[r] = acc
    # traces of B^m for m = 1..max_degree via powers up to ceil(m/2)
    powers = {1: b}
    top = max(1, (max_degree + 1) // 2)
    for m in range(2, top + 1):
        powers[m] = _sparse_matmul(powers[m - 1], b, ns, max_degree)
    traces = {}
    for m in range(1, max_degree + 1):
        lo = min(m - 1, top) if m > 1 else 0
        if m == 1:
            traces[m] = _trace(b, ns)
        else:
            p1 = min(top, m - 1)
            p2 = m - p1
            while p2 > top:
                p1 -= 1
                p2 = m - p1
            traces[m] = _pair_trace(powers[p1], powers[p2], ns, max_degree)
    logdet = MPoly.zero(ns)
    for m, t in traces.items():
        if not t.is_zero():
            logdet = logdet + t.scalar_mul(Fraction(-1, m))
    # exp(logdet), truncated; logdet has positive valuation
    det = MPoly.const(ns, 1)
    term = MPoly.const(ns, 1)
    k = 0
    while True:
        k += 1
        term = term.mul_trunc(logdet, max_degree).scalar_mul(Fraction(1, k))
        if term.is_zero():
            break
        det = det + term
    return det


def series_Z(graph: Graph, holonomy: Holonomy | None = None, degree: int = 8,
             method: str = "auto") -> TruncSeries:
    """Inverse square root of det(P + Q) up to total degree `degree`.

    For crossing-free presentations the coefficient of X^c is the
    renormalized evaluation; with crossings, apply nonplanar_fix to the
    result to obtain the true generating series.
    """
    pq = build_pq(graph, holonomy)
    if method == "bareiss":
        det = det_poly(pq.full()).truncated(degree)
    elif method in ("auto", "trlog"):
        det = truncated_det(pq, degree)
    else:
        raise InputError(f"unknown series method {method!r}")
    return inv_sqrt_series(det, degree)


# ---------------------------------------------------------------------------
# cycle polynomial
# ---------------------------------------------------------------------------

def westbury_polynomial(graph: Graph) -> MPoly:
    """Sum over subgraphs that are disjoint unions of cycles of the product
    of the angle variables covered twice (the empty subgraph contributes 1)."""
    ns = Namespace(graph.angle_ids)
    eidx = {e: i for i, e in enumerate(graph.edge_ids)}
    vslots = []  # per vertex: (vertex id, [edge index per slot])
    for v, hs in graph.vertices:
        vslots.append((v, [eidx[graph.edge_of[h][0]] for h in hs]))
    terms = {}
    for mask in range(1 << len(graph.edge_ids)):
        exps = {}
        ok = True
        for v, slots in vslots:
            inside = [p for p, ei in enumerate(slots) if mask >> ei & 1]
            if not inside:
                continue
            if len(inside) != 2:
                ok = False
                break
            i, j = inside
            exps[f"{v}:{i}{j}"] = 1
        if ok:
            terms[ns.encode(exps)] = QQi(1)
    return MPoly(ns, terms)


# ---------------------------------------------------------------------------
# blown-up graph: nodes are half-edges; an external link per edge, an
# internal link per angle.  Entry weights follow the half-edge matrix of the
# diagonal-holonomy quadratic form divided by i.
# ---------------------------------------------------------------------------

def _w1_entries(graph: Graph, t: dict):
    """(namespace, node list, {(g,h): (monomial key, coeff)}) with
    W1[left][right] = 1, W1[right][left] = -1 per edge and
    W1[g][h] = (t_g^{-1} t_h) X_a, W1[h][g] = -(t_g t_h^{-1}) X_a per angle."""
    ns = Namespace(graph.angle_ids)
    for h in graph.halfedges:
        if h not in t:
            raise InputError(f"t misses half-edge {h!r}")
        if not Fraction(t[h]):
            raise InputError(f"t[{h!r}] must be nonzero")
    entries = {}
    for e, l, r in graph.edges:
        entries[(l, r)] = (0, QQi(1))
        entries[(r, l)] = (0, QQi(-1))
    for aid, v, (i, j), (g, h) in graph.angles:
        key = ns.encode({aid: 1})
        tg, th = Fraction(t[g]), Fraction(t[h])
        entries[(g, h)] = (key, QQi(th / tg))
        entries[(h, g)] = (key, QQi(-tg / th))
    return ns, list(graph.halfedges), entries


def w1_matrix(graph: Graph, t: dict):
    """Dense half-edge matrix (list of lists of MPoly) for det_poly checks."""
    ns, nodes, entries = _w1_entries(graph, t)
    n = len(nodes)
    idx = {h: i for i, h in enumerate(nodes)}
    rows = [[MPoly.zero(ns) for _ in range(n)] for _ in range(n)]
    for (g, h), (key, c) in entries.items():
        cur = rows[idx[g]][idx[h]]
        rows[idx[g]][idx[h]] = cur + MPoly(ns, {key: c})
    return ns, rows


def abelian_curve_sum(graph: Graph, t: dict | None = None) -> MPoly:
    """Signed sum over configurations of oriented curves and dimers covering
    the blown-up graph; equals det(W1) and, inverted, the generating series
    for the diagonal holonomy diag(t_h, t_h^{-1})."""
    if t is None:
        t = {h: Fraction(1) for h in graph.halfedges}
    ns, nodes, entries = _w1_entries(graph, t)
    n = len(nodes)
    idx = {h: i for i, h in enumerate(nodes)}
    w = {}
    adj = [[] for _ in range(n)]
    for (g, h), (key, c) in entries.items():
        gi, hi = idx[g], idx[h]
        w[(gi, hi)] = (key, c)
        adj[gi].append(hi)
    for lst in adj:
        lst.sort()
    acc: dict = {}

    def emit(key, coeff, parity):
        c = -coeff if parity & 1 else coeff
        cur = acc.get(key)
        if cur is None:
            acc[key] = c
        else:
            cur = cur + c
            if cur:
                acc[key] = cur
            else:
                del acc[key]

    def cover(mask, key, coeff, parity):
        if not mask:
            emit(key, coeff, parity)
            return
        v = (mask & -mask).bit_length() - 1
        mask_v = mask & ~(1 << v)
        # dimer on {v, u}
        for u in adj[v]:
            if not (mask_v >> u) & 1:
                continue
            k1, c1 = w[(v, u)]
            k2, c2 = w[(u, v)]
            cover(mask_v & ~(1 << u), key + k1 + k2, coeff * c1 * c2, parity + 1)

        # oriented cycles of length >= 3 through v (v is the minimum node)
        def walk(cur, mask2, key2, coeff2, length):
            for u in adj[cur]:
                if u == v:
                    if length >= 3:
                        ke, ce = w[(cur, v)]
                        cover(mask2, key2 + ke, coeff2 * ce, parity + 1)
                    continue
                if not (mask2 >> u) & 1:
                    continue
                ke, ce = w[(cur, u)]
                walk(u, mask2 & ~(1 << u), key2 + ke, coeff2 * ce, length + 1)

        walk(v, mask_v, key, coeff, 1)

    cover((1 << n) - 1, 0, QQi(1), n)  # global factor (-1)^n via start parity
    return MPoly(ns, acc)


def pfaffian_dimer_sum(graph: Graph) -> MPoly:
    """Sum over dimer configurations of the blown-up graph of the product of
    covered angle variables, all signs +1; equals westbury_polynomial."""
    ns = Namespace(graph.angle_ids)
    nodes = list(graph.halfedges)
    n = len(nodes)
    idx = {h: i for i, h in enumerate(nodes)}
    links = {}
    for e, l, r in graph.edges:
        links[(idx[l], idx[r])] = 0
        links[(idx[r], idx[l])] = 0
    for aid, v, (i, j), (g, h) in graph.angles:
        key = ns.encode({aid: 1})
        links[(idx[g], idx[h])] = key
        links[(idx[h], idx[g])] = key
    adj = [[] for _ in range(n)]
    for (a, b) in links:
        adj[a].append(b)
    for lst in adj:
        lst.sort()
    acc: dict = {}

    def match(mask, key):
        if not mask:
            cur = acc.get(key)
            acc[key] = QQi(1) if cur is None else cur + QQi(1)
            return
        v = (mask & -mask).bit_length() - 1
        mask_v = mask & ~(1 << v)
        for u in adj[v]:
            if (mask_v >> u) & 1:
                match(mask_v & ~(1 << u), key + links[(v, u)])

    match((1 << n) - 1, 0)
    return MPoly(ns, acc)


# ---------------------------------------------------------------------------
# sign fix for presentations with crossings
# ---------------------------------------------------------------------------

def _flip_angles(graph: Graph, e: str):
    """The two angles at the left endpoint of e that contain e."""
    left = graph.edge_by_id[e][0]
    return graph.angles_at_halfedge(left)


def nonplanar_fix(series: TruncSeries, graph: Graph) -> TruncSeries:
    """Apply S_x = (id + Op_e1 + Op_e2 - Op_e1 Op_e2)/2 for every crossing,
    where Op_e negates the two angle variables at the left endpoint of e."""
    poly = series.poly
    for pair in sorted(tuple(sorted(p)) for p in graph.crossings):
        e1, e2 = pair
        f1 = _flip_angles(graph, e1)
        f2 = _flip_angles(graph, e2)
        p1 = poly.substitute_sign_flip(f1)
        p2 = poly.substitute_sign_flip(f2)
        p12 = p1.substitute_sign_flip(f2)
        poly = (poly + p1 + p2 - p12).scalar_mul(Fraction(1, 2))
    return TruncSeries(poly, series.degree)


# ---------------------------------------------------------------------------
# coefficient-by-coefficient comparison against the exact evaluator
# ---------------------------------------------------------------------------

def compare_with_evaluations(graph: Graph, holonomy: Holonomy | None,
                             series: TruncSeries, degree: int):
    """One row per admissible coloring of total degree <= degree:
    (coloring, series coefficient, renormalized evaluation, equal?)."""
    rows = []
    for col in admissible_colorings(graph, max_total=degree):
        exps = {a: c for a, c in internal_coloring(graph, col).items() if c}
        coeff = series.coefficient(exps)
        expect = renormalize(graph, col, eval_spin_network(graph, col, holonomy))
        rows.append((col, coeff, expect, coeff == expect))
    return rows
