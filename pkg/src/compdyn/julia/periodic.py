"""Periodic points of polynomials: location, interval-Newton enclosure and multipliers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..core.dyadic import ComplexBox, Dyadic, sqrt_upper
from ..errors import NoConvergence
from .poly import PolySpec, box_derivative, box_eval, escape_radius

ATTRACTING = "Attracting"
REPELLING = "Repelling"
PARABOLIC = "NeutralParabolicSuspected"
UNRESOLVED = "NeutralUnresolved"

# roots of unity of order up to this are tested for the parabolic flag
ROOT_OF_UNITY_ORDER = 12
MAX_DEGREE = 1 << 16


@dataclass(frozen=True)
class PeriodicPointReport:
    period: int
    point: ComplexBox
    multiplier: ComplexBox
    cls: str
    certified: bool = True            # point box proven to hold exactly one periodic point
    multiplicity: int = 1             # multiplicity as a root of f^k(z) - z
    cycle: int = 0
    bryuno_partial_sums: Optional[list] = None

    @property
    def center(self) -> complex:
        return self.point.mid_complex()

    def to_json(self) -> dict:
        def box(b):
            return {"re": [str(b.re.lo), str(b.re.hi)], "im": [str(b.im.lo), str(b.im.hi)]}
        out = {"period": self.period, "point": box(self.point), "multiplier": box(self.multiplier),
               "class": self.cls, "certified": self.certified, "multiplicity": self.multiplicity,
               "cycle": self.cycle, "approx": [self.center.real, self.center.imag],
               "multiplier_approx": [self.multiplier.mid_complex().real, self.multiplier.mid_complex().imag]}
        if self.bryuno_partial_sums is not None:
            out["bryuno_partial_sums"] = self.bryuno_partial_sums
        return out


# ---------------------------------------------------------------- exact iterates

def _sympy_poly(f: PolySpec):
    from sympy import Poly, QQ_I, symbols

    z = symbols("z")
    dom = QQ_I
    coeffs = [dom.one] + [dom(x, y) for x, y in f.exact_coeffs()]
    return Poly.from_list(coeffs, z, domain=dom)


def iterate_poly(f: PolySpec, k: int):
    """f^k as an exact sympy Poly over the Gaussian rationals."""
    p = _sympy_poly(f)
    q = p
    for _ in range(k - 1):
        q = p.compose(q)
    return q


def _gauss_pairs(P) -> list[tuple[Fraction, Fraction]]:
    out = []
    for e in P.rep.to_list():
        out.append((Fraction(int(e.x.numerator), int(e.x.denominator)),
                    Fraction(int(e.y.numerator), int(e.y.denominator))))
    return out


def _divisors(k: int) -> list[int]:
    return [j for j in range(1, k) if k % j == 0]


def primitive_factors(f: PolySpec, k: int):
    """Squarefree factors (poly, multiplicity) of f^k(z) - z with lower-period roots removed."""
    from sympy import Poly

    z = _sympy_poly(f).gens[0]
    ident = Poly(z, z, domain=_sympy_poly(f).domain)
    P = iterate_poly(f, k) - ident
    lower = [iterate_poly(f, j) - ident for j in _divisors(k)]
    out = []
    for g, m in P.sqf_list()[1]:
        for L in lower:
            h = g.gcd(L)
            if h.degree() > 0:
                g = g.quo(h)
        if g.degree() > 0:
            out.append((g.monic(), m))
    return out


# ---------------------------------------------------------------- numerics

def aberth_roots(evalfn: Callable, n: int, radius: float, max_iter: int = 500, phase: float = 0.4) -> np.ndarray:
    """n simultaneous roots of a monic degree-n function given (p, p') = evalfn(w)."""
    w = radius * np.exp(1j * (phase + 2 * np.pi * np.arange(n) / n))
    if n == 1:
        for _ in range(max_iter):
            p, dp = evalfn(w)
            step = p / dp if dp[0] != 0 else np.zeros(1)
            w = w - step
            if abs(step[0]) <= 1e-16 * (1 + abs(w[0])):
                break
        return w
    eye = np.eye(n, dtype=bool)
    for _ in range(max_iter):
        p, dp = evalfn(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, 0)
            diff = w[:, None] - w[None, :]
            diff[eye] = np.inf
            step = ratio / (1.0 - ratio * np.sum(1.0 / diff, axis=1))
        step = np.where(np.isfinite(step), step, 0)
        w = w - step
        if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(w))):
            break
    return w


def _poly_eval_fn(coeffs: np.ndarray) -> Callable:
    def ev(w):
        p = np.ones_like(w)
        dp = np.zeros_like(w)
        for c in coeffs[1:]:
            dp = dp * w + p
            p = p * w + c
        return p, dp
    return ev


def _iterate_eval_fn(f: PolySpec, k: int) -> Callable:
    c = f.complex_coeffs()
    dc = np.polyder(c)

    def ev(w):
        x = w
        der = np.ones_like(w)
        for _ in range(k):
            der = der * np.polyval(dc, x)
            x = np.polyval(c, x)
        return x - w, der - 1
    return ev


def _box_horner(coeffs: list[ComplexBox], X: ComplexBox, prec: int) -> ComplexBox:
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = acc.mul(X, prec).add(c, prec)
    return acc


def _dyadic_point(w: complex) -> ComplexBox:
    return ComplexBox.point(float(w.real), float(w.imag))


def krawczyk(H: Callable, dH: Callable, m: complex, r0: float, prec: int) -> Optional[ComplexBox]:
    """Box proven to contain exactly one zero of H near m, or None.

    K(X) = m - Y H(m) + (1 - Y H'(X)) (X - m) with Y ~ 1/H'(m); K inside the
    interior of X proves existence and uniqueness in X, and the zero lies in K.
    """
    mb = _dyadic_point(m)
    try:
        dm = dH(mb).mid_complex()
    except ZeroDivisionError:
        return None
    if dm == 0 or not cmath.isfinite(dm):
        return None
    Y = _dyadic_point(1 / dm)
    Hm = H(mb)
    one = ComplexBox.point(1)
    r = r0
    for _ in range(8):
        rd = Dyadic.ceil(Fraction(r), 80)
        X = ComplexBox.around(mb.re.lo, mb.im.lo, rd)
        K = mb.sub(Y.mul(Hm, prec), prec).add(
            one.sub(Y.mul(dH(X), prec), prec).mul(X.sub(mb, prec), prec), prec)
        if X.re.lo < K.re.lo and K.re.hi < X.re.hi and X.im.lo < K.im.lo and K.im.hi < X.im.hi:
            return K
        r *= 16
    return None


def multiplier_box(f: PolySpec, X: ComplexBox, k: int, prec: int) -> ComplexBox:
    """(f^k)'(X) by the chain rule over box images."""
    cb = f.coeff_boxes(prec + 11)
    acc = ComplexBox.point(1)
    cur = X
    for _ in range(k):
        acc = acc.mul(box_derivative(f, cur, cb, prec), prec)
        cur = box_eval(f, cur, cb, prec)
    return acc


def _near_root_of_unity(M: ComplexBox, order: int = ROOT_OF_UNITY_ORDER) -> bool:
    lo_re, hi_re = float(M.re.lo), float(M.re.hi)
    lo_im, hi_im = float(M.im.lo), float(M.im.hi)
    slack = 1e-12
    for q in range(1, order + 1):
        for p in range(q):
            if math.gcd(p, q) != 1:
                continue
            u = cmath.exp(2j * math.pi * p / q)
            if lo_re - slack <= u.real <= hi_re + slack and lo_im - slack <= u.imag <= hi_im + slack:
                return True
    return False


def classify_multiplier(M: ComplexBox) -> str:
    lo, hi = M.abs2_bounds()
    if hi < 1:
        return ATTRACTING
    if lo > 1:
        return REPELLING
    return PARABOLIC if _near_root_of_unity(M) else UNRESOLVED


def _assign_cycles(f: PolySpec, centers: list[complex]) -> list[int]:
    n = len(centers)
    ids = [-1] * n
    nxt = 0
    arr = np.array(centers)
    for i in range(n):
        if ids[i] >= 0:
            continue
        j = i
        while ids[j] < 0:
            ids[j] = nxt
            img = complex(f(centers[j]))
            j = int(np.argmin(np.abs(arr - img)))
        nxt += 1
    return ids


# ---------------------------------------------------------------- classification

def classify_periodic(f: PolySpec, k: int, tol=1e-10, prec: int = 53) -> list[PeriodicPointReport]:
    """Points of exact period k with enclosures, multipliers and classes.

    Exact coefficients: f^k(z) - z is expanded over the Gaussian rationals,
    split into squarefree factors with the lower-period parts divided out, and
    each root of a factor is enclosed by interval Newton (Krawczyk) on that
    factor.  Otherwise the roots are found and enclosed through iteration of
    f with interval coefficients.  Roots that cannot be enclosed are reported
    with certified=False and a box around their cluster.
    """
    if k < 1:
        raise ValueError("period must be positive")
    if f.d ** k > MAX_DEGREE:
        raise ValueError(f"degree {f.d}^{k} exceeds 2^16")
    tol = float(tol)
    R = float(escape_radius(f))
    found: list[tuple[ComplexBox, bool, int]] = []
    if f.is_exact:
        for g, mult in primitive_factors(f, k):
            pairs = _gauss_pairs(g)
            if g.degree() == 1:
                x, y = -pairs[1][0], -pairs[1][1]
                found.append((ComplexBox.enclose(x, y, 0, prec + 11), True, mult))
                continue
            boxes = [ComplexBox.enclose(x, y, 0, prec + 11) for x, y in pairs]
            dpairs = _gauss_pairs(g.diff())
            dboxes = [ComplexBox.enclose(x, y, 0, prec + 11) for x, y in dpairs]
            fl = np.array([complex(float(x), float(y)) for x, y in pairs])
            roots = aberth_roots(_poly_eval_fn(fl), g.degree(), 1.1 * R)
            H = lambda X, b=boxes: _box_horner(b, X, prec)
            dH = lambda X, b=dboxes: _box_horner(b, X, prec)
            for w in roots:
                found.append(_enclose(H, dH, w, roots, tol, prec) + (mult,))
    else:
        n = f.d ** k
        roots = aberth_roots(_iterate_eval_fn(f, k), n, 1.1 * R)
        cb = f.coeff_boxes(prec + 11)

        def H(X):
            cur = X
            for _ in range(k):
                cur = box_eval(f, cur, cb, prec)
            return cur.sub(X, prec)

        def dH(X):
            return multiplier_box(f, X, k, prec).sub(ComplexBox.point(1), prec)

        seen: list[ComplexBox] = []
        for w in roots:
            box, cert = _enclose(H, dH, w, roots, tol, prec)
            if any(b.intersects(box) for b in seen):
                continue        # same cluster already reported
            if _lower_period(f, box, k, prec, cb):
                continue
            mult = sum(1 for v in roots if box.contains(Fraction(v.real), Fraction(v.imag))) if not cert else 1
            seen.append(box)
            found.append((box, cert, max(mult, 1)))
    reports = []
    centers = [b.mid_complex() for b, _, _ in found]
    cyc = _assign_cycles(f, centers) if found else []
    for (box, cert, mult), cid in zip(found, cyc):
        M = multiplier_box(f, box, k, prec)
        reports.append(PeriodicPointReport(k, box, M, classify_multiplier(M), cert, mult, cid))
    reports.sort(key=lambda r: (r.cycle, r.center.real, r.center.imag))
    return reports


def _enclose(H, dH, w: complex, roots: np.ndarray, tol: float, prec: int):
    """Krawczyk box around w, or an uncertified box covering w's numerical cluster."""
    others = np.abs(roots - w)
    others = others[others > 0]
    sep = float(others.min()) if len(others) else 1.0
    r0 = max(tol, 1e-14 * (1 + abs(w)))
    if sep > 4 * r0:
        K = krawczyk(H, dH, complex(w), min(r0, sep / 4), prec)
        if K is not None:
            return K, True
    # cluster: everything within a loose radius of w
    near = roots[np.abs(roots - w) < max(1e-6, 10 * tol)]
    spread = float(np.max(np.abs(near - w))) if len(near) else 0.0
    rad = max(4 * spread, 1e-6)
    c = complex(np.mean(near)) if len(near) else w
    return ComplexBox.enclose(Fraction(c.real), Fraction(c.imag), Fraction(rad), prec + 11), False


def _lower_period(f: PolySpec, box: ComplexBox, k: int, prec: int, cb) -> bool:
    for j in _divisors(k):
        cur = box
        for _ in range(j):
            cur = box_eval(f, cur, cb, prec)
        if cur.intersects(box):
            return True
    return False


# ---------------------------------------------------------------- basins

def _pmul(a: list, b: list) -> list:
    out = [(Fraction(0), Fraction(0))] * (len(a) + len(b) - 1)
    out = [list(t) for t in out]
    for i, (ax, ay) in enumerate(a):
        if ax == 0 and ay == 0:
            continue
        for j, (bx, by) in enumerate(b):
            o = out[i + j]
            o[0] += ax * bx - ay * by
            o[1] += ax * by + ay * bx
    return [tuple(t) for t in out]


def _round_pair(p, bits: int):
    s = 1 << bits
    return (Fraction(round(p[0] * s), s), Fraction(round(p[1] * s), s))


def taylor_iterate(f: PolySpec, center: tuple[Fraction, Fraction], k: int) -> list:
    """Coefficients a_j (lowest first) of h -> f^k(center + h), exactly."""
    cs = f.exact_coeffs()[::-1]        # c_0 .. c_{d-1}
    q = [center, (Fraction(1), Fraction(0))]
    for _ in range(k):
        # Horner in polynomial arithmetic: f(q) = (...((q + c_{d-1}) q + c_{d-2}) ...) q + c_0
        acc = [(q[0][0] + cs[-1][0], q[0][1] + cs[-1][1])] + q[1:]
        for c in reversed(cs[:-1]):
            acc = _pmul(acc, q)
            acc[0] = (acc[0][0] + c[0], acc[0][1] + c[1])
        q = acc
    return q


def _mag_up(p, bits: int = 40) -> Fraction:
    x, y = p
    if x == 0 and y == 0:
        return Fraction(0)
    return sqrt_upper(x * x + y * y, bits)


def _maps_into(mags: list[Fraction], offset: Fraction, rho: Fraction) -> bool:
    """offset + sum_{j>=1} mags[j] rho^j < rho."""
    total = offset
    pw = Fraction(1)
    for a in mags[1:]:
        pw *= rho
        total += a * pw
        if total >= rho:
            return False
    return total < rho


def basin_disk(f: PolySpec, point: complex, k: int, bits: int = 48) -> Optional[tuple[complex, Fraction]]:
    """(center, rho) with f^k mapping the closed disk D(center, rho) strictly into itself.

    Such a disk lies in the immediate basin of an attracting cycle and hence in
    the interior of the filled Julia set.  The check is exact: the Taylor
    coefficients of f^k at the dyadic center are rational, and each modulus is
    rounded up.  Requires exact coefficients.
    """
    if not f.is_exact:
        return None
    c = _round_pair((Fraction(point.real), Fraction(point.imag)), bits)
    coeffs = taylor_iterate(f, c, k)
    offset = _mag_up((coeffs[0][0] - c[0], coeffs[0][1] - c[1]))
    mags = [Fraction(0)] + [_mag_up(a) for a in coeffs[1:]]
    R = escape_radius(f)
    hi = None
    rho = 2 * R
    lo = None
    for _ in range(60):
        if _maps_into(mags, offset, rho):
            lo = rho
            break
        hi = rho
        rho = rho * Fraction(9, 10)
        rho = Fraction(math.ceil(rho * (1 << 30)), 1 << 30)
    if lo is None:
        return None
    if hi is not None:
        for _ in range(14):
            mid = (lo + hi) / 2
            mid = Fraction(math.floor(mid * (1 << 30)), 1 << 30)
            if mid <= lo:
                break
            if _maps_into(mags, offset, mid):
                lo = mid
            else:
                hi = mid
    return complex(float(c[0]), float(c[1])), lo


def attracting_disks(f: PolySpec, max_period: int = 4, prec: int = 53) -> list[tuple[complex, Fraction]]:
    """Certified basin disks around every attracting cycle point of period <= max_period."""
    out = []
    for k in range(1, max_period + 1):
        if f.d ** k > 256:
            break
        try:
            reps = classify_periodic(f, k, prec=prec)
        except NoConvergence:
            continue
        for r in reps:
            if r.cls == ATTRACTING and r.certified:
                disk = basin_disk(f, r.center, k)
                if disk is not None:
                    out.append(disk)
    return out
