"""Escape-certified box approximation of filled Julia sets.

Boxes are iterated in float64 interval arithmetic; every operation rounds its
bounds one ulp outward, which encloses the exact result because IEEE
operations are correctly rounded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .periodic import attracting_disks
from .poly import PolySpec, escape_radius

UNKNOWN, ESCAPING, INTERIOR = 0, 1, 2
PGM_LEVEL = {ESCAPING: 255, UNKNOWN: 128, INTERIOR: 0}
NAMES = {ESCAPING: "escaping", UNKNOWN: "unknown", INTERIOR: "interior"}

_NINF, _PINF = -np.inf, np.inf


def _dn(a):
    return np.nextafter(a, _NINF)


def _up(a):
    return np.nextafter(a, _PINF)


def _float_enclose(q: Fraction) -> tuple[float, float]:
    f = float(q)
    fq = Fraction(f)
    if fq == q:
        return f, f
    return (f, float(np.nextafter(f, _PINF))) if fq < q else (float(np.nextafter(f, _NINF)), f)


class _IBox:
    """Arrays of complex boxes [xl, xh] + i[yl, yh]."""

    __slots__ = ("xl", "xh", "yl", "yh")

    def __init__(self, xl, xh, yl, yh):
        self.xl, self.xh, self.yl, self.yh = xl, xh, yl, yh

    def take(self, idx):
        return _IBox(self.xl[idx], self.xh[idx], self.yl[idx], self.yh[idx])


def _imul(al, ah, bl, bh):
    p = (al * bl, al * bh, ah * bl, ah * bh)
    lo = np.minimum(np.minimum(p[0], p[1]), np.minimum(p[2], p[3]))
    hi = np.maximum(np.maximum(p[0], p[1]), np.maximum(p[2], p[3]))
    return _dn(lo), _up(hi)


def _isqr(al, ah):
    a2, b2 = al * al, ah * ah
    lo = np.where(al >= 0, a2, np.where(ah <= 0, b2, 0.0))
    hi = np.maximum(a2, b2)
    return np.where(lo > 0, _dn(lo), 0.0), _up(hi)


def _csqr(z: _IBox) -> _IBox:
    x2l, x2h = _isqr(z.xl, z.xh)
    y2l, y2h = _isqr(z.yl, z.yh)
    pl, ph = _imul(z.xl, z.xh, z.yl, z.yh)
    return _IBox(_dn(x2l - y2h), _up(x2h - y2l), 2 * pl, 2 * ph)


def _cmul(a: _IBox, b: _IBox) -> _IBox:
    acl, ach = _imul(a.xl, a.xh, b.xl, b.xh)
    bdl, bdh = _imul(a.yl, a.yh, b.yl, b.yh)
    adl, adh = _imul(a.xl, a.xh, b.yl, b.yh)
    bcl, bch = _imul(a.yl, a.yh, b.xl, b.xh)
    return _IBox(_dn(acl - bdh), _up(ach - bdl), _dn(adl + bcl), _up(adh + bch))


def _cadd(a: _IBox, c) -> _IBox:
    (xl, xh), (yl, yh) = c
    return _IBox(_dn(a.xl + xl), _up(a.xh + xh), _dn(a.yl + yl), _up(a.yh + yh))


def _coeff_intervals(f: PolySpec):
    out = []
    for c in f.coeffs:
        if c.exact is not None:
            x, y = c.exact
            out.append((_float_enclose(x), _float_enclose(y)))
        else:
            x, y = c(60)
            e = Fraction(1, 1 << 60)
            out.append(((_float_enclose(x - e)[0], _float_enclose(x + e)[1]),
                        (_float_enclose(y - e)[0], _float_enclose(y + e)[1])))
    return out


def _step(f: PolySpec, z: _IBox, cint) -> _IBox:
    if not f.has_trace_term():
        acc = _cadd(_csqr(z), cint[1])
        rest = cint[2:]
    else:
        acc = _cadd(z, cint[0])
        rest = cint[1:]
    for c in rest:
        acc = _cadd(_cmul(acc, z), c)
    return acc


def _mig2_lower(z: _IBox):
    mx = np.where(z.xl > 0, z.xl, np.where(z.xh < 0, -z.xh, 0.0))
    my = np.where(z.yl > 0, z.yl, np.where(z.yh < 0, -z.yh, 0.0))
    return _dn(_dn(mx * mx) + _dn(my * my))


def _inside_disk(z: _IBox, cx: float, cy: float, rho2_lo: float):
    dx = np.maximum(np.abs(_dn(z.xl - cx)), np.abs(_up(z.xh - cx)))
    dy = np.maximum(np.abs(_dn(z.yl - cy)), np.abs(_up(z.yh - cy)))
    return _up(_up(dx * dx) + _up(dy * dy)) < rho2_lo


@dataclass(frozen=True)
class BoxGrid:
    """Classification of the 2^-r boxes tiling [-W, W]^2.

    ``cls[j, i]`` is the box [-W + i s, -W + (i+1) s] x [W - (j+1) s, W - j s]
    with s = 2^-r (row 0 at the top).  Escaping boxes are disjoint from K_f,
    Interior boxes lie in the interior of K_f, so K_f is covered by the
    Unknown and Interior boxes.
    """

    r: int
    W: Fraction
    R: Fraction
    cls: np.ndarray = field(repr=False)
    steps: np.ndarray = field(repr=False)         # escape step, -1 when not escaping
    max_iter: int = 0
    disks: tuple = ()

    @property
    def size(self) -> int:
        return self.cls.shape[0]

    @property
    def spacing(self) -> Fraction:
        return Fraction(1, 1 << self.r)

    def counts(self) -> dict:
        return {NAMES[k]: int(np.sum(self.cls == k)) for k in (ESCAPING, UNKNOWN, INTERIOR)}

    def fraction(self, kind: int) -> float:
        return float(np.mean(self.cls == kind))

    def box_bounds(self, i: int, j: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        s = self.spacing
        return (-self.W + i * s, -self.W + (i + 1) * s, self.W - (j + 1) * s, self.W - j * s)

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        s = 2.0 ** -self.r
        ax = -float(self.W) + (np.arange(self.size) + 0.5) * s
        return ax[None, :].repeat(self.size, 0), (-ax)[:, None].repeat(self.size, 1)

    def boundary_diagnostic(self) -> float:
        """Fraction of Unknown boxes 4-adjacent to both an Escaping and an Interior box."""
        c = self.cls
        unk = c == UNKNOWN
        if not unk.any():
            return 0.0

        def near(kind):
            m = c == kind
            out = np.zeros_like(m)
            out[1:, :] |= m[:-1, :]
            out[:-1, :] |= m[1:, :]
            out[:, 1:] |= m[:, :-1]
            out[:, :-1] |= m[:, 1:]
            return out
        both = unk & near(ESCAPING) & near(INTERIOR)
        return float(both.sum() / unk.sum())

    def to_pgm(self) -> bytes:
        img = np.full(self.cls.shape, PGM_LEVEL[UNKNOWN], dtype=np.uint8)
        img[self.cls == ESCAPING] = PGM_LEVEL[ESCAPING]
        img[self.cls == INTERIOR] = PGM_LEVEL[INTERIOR]
        header = f"P5\n{self.size} {self.size}\n255\n".encode()
        return header + img.tobytes()

    def sidecar(self) -> dict:
        W = str(self.W)
        return {"window": {"re": [f"-{W}", W], "im": [f"-{W}", W]},
                "resolution": self.r, "size": self.size,
                "escape_radius": str(self.R), "max_iter": self.max_iter,
                "counts": self.counts(),
                "interior_fraction": self.fraction(INTERIOR),
                "boundary_unknown_fraction": self.boundary_diagnostic(),
                "basin_disks": [{"center": [c.real, c.imag], "radius": str(rho)} for c, rho in self.disks]}

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), sort_keys=True, indent=1) + "\n"


def read_pgm(data: bytes) -> np.ndarray:
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def filled_julia_approx(f: PolySpec, r: int, max_iter: int = 64, disks: Optional[list] = None,
                        max_period: int = 4) -> BoxGrid:
    """Classify the boxes of side 2^-r in [-W, W]^2, W = R rounded up to the grid.

    A box is Escaping at the first step where its image box avoids the disk
    |z| < R, and Interior once its image box falls inside a certified basin
    disk of an attracting cycle (period <= ``max_period``; pass ``disks`` to
    override).  Everything else is Unknown.
    """
    if r < 2 or max_iter < 1:
        raise ValueError("need r >= 2 and max_iter >= 1")
    R = escape_radius(f)
    W = Fraction(math.ceil(R * (1 << r)), 1 << r)
    n = int(2 * W * (1 << r))
    s = 2.0 ** -r
    edges = -float(W) + np.arange(n + 1) * s          # exact: dyadic with few bits
    xl = np.tile(edges[:-1], n)
    xh = np.tile(edges[1:], n)
    top = float(W) - np.arange(n + 1) * s
    yh = np.repeat(top[:-1], n)
    yl = np.repeat(top[1:], n)
    if disks is None:
        disks = attracting_disks(f, max_period) if f.is_exact else []
    dlist = []
    for c, rho in disks:
        rho2 = Fraction(rho) ** 2
        lo = _float_enclose(rho2)[0]
        dlist.append((float(c.real), float(c.imag), lo))
    R2 = float(R * R)
    assert Fraction(R2) == R * R
    cls = np.full(n * n, UNKNOWN, dtype=np.uint8)
    steps = np.full(n * n, -1, dtype=np.int32)
    cint = _coeff_intervals(f)
    idx = np.arange(n * n)
    z = _IBox(xl, xh, yl, yh)
    blowup = 64.0 * float(R)
    for k in range(max_iter + 1):
        esc = _mig2_lower(z) >= R2
        cls[idx[esc]] = ESCAPING
        steps[idx[esc]] = k
        done = esc
        for cx, cy, rho2 in dlist:
            inn = ~done & _inside_disk(z, cx, cy, rho2)
            cls[idx[inn]] = INTERIOR
            done = done | inn
        # boxes that have blown up can no longer be classified
        wide = (z.xh - z.xl > blowup) | (z.yh - z.yl > blowup) | ~np.isfinite(z.xl + z.xh + z.yl + z.yh)
        keep = ~(done | wide)
        idx = idx[keep]
        if k == max_iter or len(idx) == 0:
            break
        z = _step(f, z.take(keep), cint)
    return BoxGrid(r, W, R, cls.reshape(n, n), steps.reshape(n, n), max_iter, tuple(disks))
