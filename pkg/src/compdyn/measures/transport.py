"""Exact Wasserstein-1 distances between finitely supported measures.

Masses are kept as exact rationals throughout.  Costs are either supplied as
exact rationals or taken as floor(d * 2^p), so the reported value is a lower
end with the true distance in [value, value + error].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from ..errors import InfeasibleWeights
from .measure import CIRCLE, DEFAULT_PWORK, DiscreteMeasure, circle_distance, metric_float, metric_floor

log = logging.getLogger(__name__)

# the exact solver is used up to this many source-target pairs
EXACT_PAIR_LIMIT = 4096
ASSIGNMENT_LIMIT = 8192


@dataclass(frozen=True)
class TransportPlan:
    flows: tuple                    # (i, j, mass) with exact rational masses
    cost: Fraction                  # value of the plan under the (rounded) costs
    error: Fraction                 # true W1 lies in [cost, cost + error]
    method: str = "ssp"
    potentials: Optional[tuple] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "cost": str(self.cost),
            "cost_float": float(self.cost),
            "error": str(self.error),
            "method": self.method,
            "flows": [{"from": i, "to": j, "mass": str(m)} for i, j, m in self.flows],
        }


def _integer_masses(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[int], list[int], int]:
    den = 1
    for w in list(a) + list(b):
        den = lcm(den, Fraction(w).denominator)
    return [int(w * den) for w in a], [int(w * den) for w in b], den


def _check_marginals(a, b) -> None:
    for name, ws in (("source", a), ("target", b)):
        if any(Fraction(w) < 0 for w in ws):
            raise InfeasibleWeights(f"negative {name} weight")
        if sum(Fraction(w) for w in ws) != 1:
            raise InfeasibleWeights(f"{name} weights do not sum to 1")


def min_cost_flow(supply: list[int], demand: list[int], cost: list[list[int]]) -> dict:
    """Successive shortest paths on the complete bipartite network.

    Integer supplies, demands and nonnegative integer costs.  Returns the flow
    as {(i, j): amount}.  Dense Dijkstra on reduced costs; node potentials
    keep every residual reduced cost nonnegative.
    """
    n, m = len(supply), len(demand)
    if sum(supply) != sum(demand):
        raise InfeasibleWeights("supply and demand totals differ")
    r = list(supply)
    s = list(demand)
    back = [dict() for _ in range(m)]   # back[j][i] = flow on (i, j)
    # node numbering: sources 0..n-1, sinks n..n+m-1, S = n+m, T = n+m+1
    S, T = n + m, n + m + 1
    V = n + m + 2
    dual = [0] * V
    remaining = sum(r)
    while remaining > 0:
        dist = [None] * V
        prev = [-1] * V
        seen = [False] * V
        dist[S] = 0
        while True:
            v, best = -1, None
            for u in range(V):
                if not seen[u] and dist[u] is not None and (best is None or dist[u] < best):
                    v, best = u, dist[u]
            if v < 0 or v == T:
                break
            seen[v] = True
            dv = dist[v] + dual[v]
            if v == S:
                out = ((i, 0) for i in range(n) if r[i] > 0)
            elif v < n:
                row = cost[v]
                out = ((n + j, row[j]) for j in range(m))
            else:
                j = v - n
                out = [(i, -cost[i][j]) for i in back[j]]
                if s[j] > 0:
                    out.append((T, 0))
            for u, c in out:
                if seen[u]:
                    continue
                nd = dv + c - dual[u]
                if dist[u] is None or nd < dist[u]:
                    dist[u] = nd
                    prev[u] = v
        if dist[T] is None:
            raise InfeasibleWeights("no augmenting path")
        seen[T] = True
        for u in range(V):
            if seen[u]:
                dual[u] -= dist[T] - dist[u]
        # collect the path T <- j <- i <- ... <- S
        path = []
        u = T
        while u != S:
            path.append((prev[u], u))
            u = prev[u]
        path.reverse()
        amount = None
        for a_, b_ in path:
            if a_ == S:
                cap = r[b_]
            elif b_ == T:
                cap = s[a_ - n]
            elif a_ >= n:
                cap = back[a_ - n][b_]
            else:
                continue
            amount = cap if amount is None else min(amount, cap)
        for a_, b_ in path:
            if a_ == S:
                r[b_] -= amount
            elif b_ == T:
                s[a_ - n] -= amount
            elif a_ < n:
                j = b_ - n
                back[j][a_] = back[j].get(a_, 0) + amount
            else:
                j = a_ - n
                back[j][b_] -= amount
                if back[j][b_] == 0:
                    del back[j][b_]
        remaining -= amount
    return {(i, j): f for j in range(m) for i, f in back[j].items() if f}


def dual_potentials(flow: dict, cost: list[list[int]], n: int, m: int) -> tuple[list[int], list[int]]:
    """Potentials u, v with u_i + v_j <= c_ij everywhere and equality on the
    support of the optimal flow (Bellman-Ford on the residual graph)."""
    # nodes: sources 0..n-1, sinks n..n+m-1; distances start at 0 (virtual root)
    d = [0] * (n + m)
    edges = []
    for i in range(n):
        for j in range(m):
            edges.append((i, n + j, cost[i][j]))
            if flow.get((i, j), 0) > 0:
                edges.append((n + j, i, -cost[i][j]))
    for _ in range(n + m):
        changed = False
        for u, v, c in edges:
            if d[u] + c < d[v]:
                d[v] = d[u] + c
                changed = True
        if not changed:
            break
    else:
        raise RuntimeError("negative cycle: flow is not optimal")
    return [-d[i] for i in range(n)], [d[n + j] for j in range(m)]


def transport(a: Sequence, b: Sequence, cost: Sequence[Sequence], with_dual: bool = False) -> TransportPlan:
    """Exact optimal transport for rational weights and nonnegative rational costs."""
    _check_marginals(a, b)
    n, m = len(a), len(b)
    cden = 1
    for row in cost:
        for c in row:
            cden = lcm(cden, Fraction(c).denominator)
    icost = [[int(Fraction(c) * cden) for c in row] for row in cost]
    if any(c < 0 for row in icost for c in row):
        raise ValueError("costs must be nonnegative")
    sa, sb, den = _integer_masses(a, b)
    flow = min_cost_flow(sa, sb, icost)
    total = sum(f * icost[i][j] for (i, j), f in flow.items())
    flows = tuple((i, j, Fraction(f, den)) for (i, j), f in sorted(flow.items()))
    pots = None
    if with_dual:
        u, v = dual_potentials(flow, icost, n, m)
        pots = (tuple(Fraction(x, cden) for x in u), tuple(Fraction(x, cden) for x in v))
    return TransportPlan(flows, Fraction(total, den * cden), Fraction(0), "ssp", pots)


def cost_matrix_floor(mu: DiscreteMeasure, nu: DiscreteMeasure, metric: str, p: int) -> list[list[int]]:
    return [[metric_floor(metric, x, y, p) for y in nu.points] for x in mu.points]


def _assignment(mu: DiscreteMeasure, nu: DiscreteMeasure, metric: str, p: int) -> TransportPlan:
    """Split both measures into equal unit masses 1/k (k the common weight
    denominator) and solve the assignment problem on float costs."""
    from scipy.optimize import linear_sum_assignment

    k = _common_den(list(mu.weights) + list(nu.weights))
    if k > ASSIGNMENT_LIMIT:
        raise ValueError(f"assignment route needs {k} unit masses, above the {ASSIGNMENT_LIMIT} cap")
    ri = np.repeat(np.arange(len(mu)), [int(w * k) for w in mu.weights])
    ci = np.repeat(np.arange(len(nu)), [int(w * k) for w in nu.weights])
    C = metric_float(metric, mu.coords()[ri], nu.coords()[ci])
    rows, cols = linear_sum_assignment(C)
    # float costs are within a few ulps of the exact ones; 2^-48 absorbs that for d <= 4
    value = Fraction(float(C[rows, cols].sum())) / k
    w = Fraction(1, k)
    agg: dict = {}
    for r_, c_ in zip(rows, cols):
        key = (int(ri[r_]), int(ci[c_]))
        agg[key] = agg.get(key, Fraction(0)) + w
    flows = tuple((i, j, f) for (i, j), f in sorted(agg.items()))
    err = Fraction(1, 1 << 48)
    return TransportPlan(flows, max(Fraction(0), value - err), 2 * err, "assignment")


def _linear_program(mu: DiscreteMeasure, nu: DiscreteMeasure, metric: str) -> TransportPlan:
    """Float transport LP (HiGHS) for large general instances.  Masses in the
    returned plan are the solver's, rounded to rationals; the value error bound
    reflects solver tolerance rather than exact arithmetic."""
    from scipy.optimize import linprog
    from scipy.sparse import identity, kron, vstack

    n, m = len(mu), len(nu)
    C = metric_float(metric, mu.coords(), nu.coords())
    Aeq = vstack([kron(identity(n), np.ones((1, m))), kron(np.ones((1, n)), identity(m))]).tocsr()
    beq = np.concatenate([mu.weights_float(), nu.weights_float()])
    res = linprog(C.ravel(), A_eq=Aeq, b_eq=beq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise InfeasibleWeights(f"transport LP failed: {res.message}")
    X = res.x.reshape(n, m)
    flows = tuple((int(i), int(j), Fraction(float(X[i, j])).limit_denominator(1 << 40))
                  for i, j in zip(*np.nonzero(X > 1e-15)))
    err = Fraction(1, 1 << 30)
    return TransportPlan(flows, max(Fraction(0), Fraction(float(res.fun)) - err), 2 * err, "lp")


def _common_den(values) -> int:
    den = 1
    for v in values:
        d = v.denominator
        if den % d:
            den = lcm(den, d)
    return den


def circle_w1(a_pts: Sequence[Fraction], a_w: Sequence[Fraction], b_pts: Sequence[Fraction],
              b_w: Sequence[Fraction]) -> tuple[Fraction, tuple]:
    """Exact W1 on the circle R/Z: integral of |F - G - c| with c a weighted median of F - G.

    Returns the value and a plan obtained by cutting the circle where F - G = c
    and coupling monotonically from there.  Runs on integers after scaling by
    common denominators.
    """
    a_pts = [Fraction(x) for x in a_pts]
    b_pts = [Fraction(x) for x in b_pts]
    DX = _common_den(a_pts + b_pts)
    DW = _common_den([Fraction(w) for w in list(a_w) + list(b_w)])
    ax = [x.numerator * (DX // x.denominator) % DX for x in a_pts]
    bx = [x.numerator * (DX // x.denominator) % DX for x in b_pts]
    aw = [int(Fraction(w) * DW) for w in a_w]
    bw = [int(Fraction(w) * DW) for w in b_w]
    events: dict = {}
    for x, w in zip(ax, aw):
        events[x] = events.get(x, 0) + w
    for x, w in zip(bx, bw):
        events[x] = events.get(x, 0) - w
    xs = sorted(events)
    if not xs:
        return Fraction(0), ()
    # h is constant on [xs[k], xs[k+1]) and on the wrap-around piece
    h = 0
    pieces = []
    for k, x in enumerate(xs):
        h += events[x]
        nxt = xs[k + 1] if k + 1 < len(xs) else xs[0] + DX
        pieces.append((h, nxt - x, x))
    order = sorted(pieces)
    acc = 0
    c, cut = order[-1][0], order[-1][2]
    for val, length, start in order:
        acc += length
        if 2 * acc >= DX:
            c, cut = val, start
            break
    value = Fraction(sum(abs(val - c) * length for val, length, _ in pieces), DX * DW)
    plan = _monotone_from(cut, DX, ax, aw, bx, bw, DW)
    return value, plan


def _monotone_from(cut: int, DX: int, ax, aw, bx, bw, DW: int) -> tuple:
    """North-west corner coupling of both measures unrolled to (cut, cut + 1]."""
    def unroll(xs, ws):
        # position cut itself goes last: its mass sits at the end of the unrolled interval
        idx = sorted(range(len(xs)), key=lambda i: ((xs[i] - cut - 1) % DX, i))
        return [(i, ws[i]) for i in idx]

    A, B = unroll(ax, aw), unroll(bx, bw)
    flows: dict = {}
    ia = ib = 0
    ra = A[0][1] if A else 0
    rb = B[0][1] if B else 0
    while ia < len(A) and ib < len(B):
        t = min(ra, rb)
        if t > 0:
            key = (A[ia][0], B[ib][0])
            flows[key] = flows.get(key, 0) + t
        ra -= t
        rb -= t
        if ra == 0:
            ia += 1
            ra = A[ia][1] if ia < len(A) else 0
        if rb == 0:
            ib += 1
            rb = B[ib][1] if ib < len(B) else 0
    return tuple((i, j, Fraction(f, DW)) for (i, j), f in sorted(flows.items()))


def wasserstein1(mu: DiscreteMeasure, nu: DiscreteMeasure, metric: Optional[str] = None,
                 p: int = DEFAULT_PWORK, method: str = "auto", with_dual: bool = False) -> TransportPlan:
    """W1(mu, nu) with a transport plan.

    ``method``: ``exact`` (successive shortest paths on floor(d * 2^p) costs),
    ``circle`` (closed form on R/Z), ``assignment`` (equal-mass splitting of
    uniform measures) or ``auto``, which takes the exact solver for small
    problems and otherwise the closed form or the assignment route when they apply.
    """
    metric = metric or mu.metric
    _check_marginals(mu.weights, nu.weights)
    n, m = len(mu), len(nu)
    if method == "auto":
        if n * m <= EXACT_PAIR_LIMIT:
            method = "exact"
        elif metric == CIRCLE:
            method = "circle"
        elif _common_den(list(mu.weights) + list(nu.weights)) <= ASSIGNMENT_LIMIT:
            method = "assignment"
        else:
            method = "lp"
    if method == "circle":
        if metric != CIRCLE:
            raise ValueError("closed form applies to the circle metric only")
        value, flows = circle_w1([q[0] for q in mu.points], mu.weights, [q[0] for q in nu.points], nu.weights)
        return TransportPlan(flows, value, Fraction(0), "circle")
    if method == "assignment":
        return _assignment(mu, nu, metric, p)
    if method == "lp":
        return _linear_program(mu, nu, metric)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if metric == CIRCLE:
        cost = [[circle_distance(x[0], y[0]) for y in nu.points] for x in mu.points]
        return transport(mu.weights, nu.weights, cost, with_dual)
    icost = cost_matrix_floor(mu, nu, metric, p)
    plan = transport(mu.weights, nu.weights, icost, with_dual)
    scale = Fraction(1, 1 << p)
    pots = None
    if plan.potentials is not None:
        pots = tuple(tuple(x * scale for x in side) for side in plan.potentials)
    return TransportPlan(plan.flows, plan.cost * scale, scale, "ssp", pots)
