"""Numerics for quasi-polynomial and other evaluable matrices: contour
counting via the argument principle, root localization, block-Toeplitz
local indices, regional coprimeness, and TDS system-matrix assembly.

Exact data lives in exactalg/polymat/ratmat; everything here that touches
floating point is deliberate and tolerance-guarded.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousRankError,
    AnalysisError,
    ContourError,
    ConvergenceError,
    InputError,
)
from .exactalg import QQ, Poly
from .polymat import PolyMat
from .ratmat import IndexTuple, RatMat

__all__ = [
    "QuasiPolyEntry",
    "QuasiPolyMat",
    "Contour",
    "CountResult",
    "TdsData",
    "as_evaluable",
    "qp_eval",
    "qp_eval_deriv",
    "qp_is_regular",
    "qp_transfer_closure",
    "nrank_sampled",
    "count_zeros_minus_poles",
    "roots_in_region",
    "local_indices",
    "regional_coprime",
    "build_tds_amd",
    "tds_pole_count",
]

_EXP_LIMIT = 700.0  # beyond this |Re(z)|*tau, exp over/underflows badly


class QuasiPolyEntry:
    """Finite sum of p(z) * exp(-tau z) terms with exact polynomial p and
    exact nonnegative rational delay tau; delays strictly increasing."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for p, tau in terms:
            p = Poly.coerce(p)
            tau = QQ(tau)
            if tau < 0:
                raise InputError("negative delay in quasi-polynomial term")
            if p.is_zero:
                continue
            if tau in merged:
                merged[tau] = merged[tau] + p
            else:
                merged[tau] = p
        cleaned = tuple(sorted(((t, p) for t, p in merged.items()
                                if not p.is_zero)))
        object.__setattr__(self, "terms",
                           tuple((p, t) for t, p in cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("QuasiPolyEntry is immutable")

    @staticmethod
    def coerce(value) -> "QuasiPolyEntry":
        if isinstance(value, QuasiPolyEntry):
            return value
        return QuasiPolyEntry(((Poly.coerce(value), QQ(0)),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_polynomial(self) -> bool:
        return all(not tau for _, tau in self.terms)

    def to_poly(self) -> Poly:
        if self.is_zero:
            return Poly.zero()
        if not self.is_polynomial:
            raise InputError("quasi-polynomial has delayed terms")
        return self.terms[0][0]

    def __eq__(self, other):
        if not isinstance(other, QuasiPolyEntry):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        other = QuasiPolyEntry.coerce(other)
        return QuasiPolyEntry(self.terms + other.terms)

    def __neg__(self):
        return QuasiPolyEntry(tuple((-p, t) for p, t in self.terms))

    def __sub__(self, other):
        return self + (-QuasiPolyEntry.coerce(other))

    def __mul__(self, other):
        other = QuasiPolyEntry.coerce(other)
        out = []
        for p1, t1 in self.terms:
            for p2, t2 in other.terms:
                out.append((p1 * p2, t1 + t2))
        return QuasiPolyEntry(out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative power of a quasi-polynomial")
        result = QuasiPolyEntry.coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "QuasiPolyEntry":
        # d/dz [p e^{-tau z}] = (p' - tau p) e^{-tau z}
        return QuasiPolyEntry(tuple(
            (p.derivative() - p.scale(tau), tau) for p, tau in self.terms))

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for p, tau in self.terms:
            arg = -float(tau) * z.real
            if arg > _EXP_LIMIT:
                raise AnalysisError(
                    f"exponential overflow at Re(z) = {z.real:g}, tau = {tau}")
            acc += p(z) * cmath.exp(-float(tau) * z)
        return acc

    def __repr__(self):
        from .frontio.render import qp_to_str

        try:
            return f"QuasiPolyEntry({qp_to_str(self)})"
        except Exception:
            return f"QuasiPolyEntry({self.terms!r})"


class QuasiPolyMat:
    """Dense matrix of quasi-polynomial entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        grid = tuple(tuple(QuasiPolyEntry.coerce(e) for e in row)
                     for row in entries)
        if grid and any(len(row) != len(grid[0]) for row in grid):
            raise InputError("ragged quasi-polynomial matrix")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", len(grid[0]) if grid else 0)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiPolyMat is immutable")

    @staticmethod
    def from_polymat(A: PolyMat) -> "QuasiPolyMat":
        return QuasiPolyMat(A.entries)

    @staticmethod
    def identity(n: int) -> "QuasiPolyMat":
        return QuasiPolyMat.from_polymat(PolyMat.identity(n))

    @staticmethod
    def zeros(rows: int, cols: int) -> "QuasiPolyMat":
        return QuasiPolyMat.from_polymat(PolyMat.zeros(rows, cols))

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, QuasiPolyMat):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __neg__(self):
        return QuasiPolyMat([[-e for e in row] for row in self.entries])

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise InputError("matrix addition: shape mismatch")
        return QuasiPolyMat([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return self + (-other)

    def transpose(self) -> "QuasiPolyMat":
        return QuasiPolyMat(list(zip(*self.entries))) if self.entries else self

    def hstack(self, other: "QuasiPolyMat") -> "QuasiPolyMat":
        if self.rows != other.rows:
            raise InputError("hstack: row counts differ")
        return QuasiPolyMat([a + b for a, b in
                             zip(self.entries, other.entries)])

    def vstack(self, other: "QuasiPolyMat") -> "QuasiPolyMat":
        if self.cols != other.cols:
            raise InputError("vstack: column counts differ")
        return QuasiPolyMat(self.entries + other.entries)

    @property
    def is_polynomial(self) -> bool:
        return all(e.is_polynomial for row in self.entries for e in row)

    def to_polymat(self) -> PolyMat:
        return PolyMat([[e.to_poly() for e in row] for row in self.entries])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def eval(self, z: complex):
        return np.array([[e(z) for e in row] for row in self.entries],
                        dtype=complex)

    def eval_deriv(self, z: complex):
        return np.array([[e.derivative()(z) for e in row]
                         for row in self.entries], dtype=complex)

    def __repr__(self):
        return f"QuasiPolyMat({self.rows}x{self.cols})"


def qp_eval(M: QuasiPolyMat, z: complex):
    return M.eval(z)


def qp_eval_deriv(M: QuasiPolyMat, z: complex):
    return M.eval_deriv(z)


# ---------------------------------------------------------------------------
# evaluable wrappers


class _RatEvaluable:
    """Evaluable view of an exact rational matrix with exact derivative."""

    __slots__ = ("grid", "dgrid", "shape")

    def __init__(self, M: RatMat):
        self.grid = M.entries
        self.dgrid = tuple(tuple(e.derivative() for e in row)
                           for row in M.entries)
        self.shape = (M.rows, M.cols)

    def eval(self, z: complex):
        return np.array([[e(z) for e in row] for row in self.grid],
                        dtype=complex)

    def eval_deriv(self, z: complex):
        return np.array([[e(z) for e in row] for row in self.dgrid],
                        dtype=complex)


class _QpTransferEvaluable:
    """Transfer function D + C A^{-1} B of a quasipoly AMD, with the
    analytic derivative assembled from block derivatives."""

    __slots__ = ("A", "B", "C", "D", "shape")

    def __init__(self, A, B, C, D):
        self.A, self.B, self.C, self.D = A, B, C, D
        self.shape = (C.rows, B.cols)

    def eval(self, z: complex):
        a = self.A.eval(z)
        x = np.linalg.solve(a, self.B.eval(z))
        return self.D.eval(z) + self.C.eval(z) @ x

    def eval_deriv(self, z: complex):
        a = self.A.eval(z)
        b = self.B.eval(z)
        c = self.C.eval(z)
        ainv_b = np.linalg.solve(a, b)
        c_ainv = np.linalg.solve(a.T, c.T).T
        return (self.D.eval_deriv(z)
                + self.C.eval_deriv(z) @ ainv_b
                - c_ainv @ self.A.eval_deriv(z) @ ainv_b
                + c_ainv @ self.B.eval_deriv(z))


def qp_transfer_closure(H) -> _QpTransferEvaluable:
    return _QpTransferEvaluable(H.A, H.B, H.C, H.D)


def as_evaluable(M):
    """Adapt exact matrix types to the eval/eval_deriv interface."""
    if hasattr(M, "eval_deriv") and hasattr(M, "eval"):
        return M
    if isinstance(M, PolyMat):
        return _RatEvaluable(RatMat.from_polymat(M))
    if isinstance(M, RatMat):
        return _RatEvaluable(M)
    raise InputError(f"cannot evaluate object of type {type(M).__name__}")


def qp_is_regular(A: QuasiPolyMat, samples: int = 8) -> bool:
    """Sampled regularity test: det nonzero at some sample point."""
    if A.rows != A.cols:
        return False
    rng = np.random.default_rng(20260823)
    for _ in range(samples):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        try:
            if abs(np.linalg.det(A.eval(z))) > 1e-12:
                return True
        except AnalysisError:
            continue
    return False


_RANK_ZERO = 1e-9
_RANK_BAND = (1e-11, 1e-7)


def _numeric_rank(mat, scale: float | None = None) -> int:
    """Numeric rank; `scale` overrides the reference magnitude so that
    all-noise matrices are not self-normalized into full rank."""
    if mat.size == 0:
        return 0
    svals = np.linalg.svd(mat, compute_uv=False)
    top = svals[0] if len(svals) else 0.0
    ref = top if scale is None else max(scale, 0.0)
    if ref == 0.0:
        return 0
    in_band = [s for s in svals
               if _RANK_BAND[0] * ref < s < _RANK_BAND[1] * ref]
    if in_band:
        raise AmbiguousRankError(
            f"singular values {in_band} fall in the ambiguity band")
    return int(sum(1 for s in svals if s > _RANK_ZERO * ref))


def nrank_sampled(M, samples: int = 16) -> int:
    """Max numeric rank over deterministic pseudo-random sample points."""
    if samples < 1:
        raise InputError("need at least one sample point")
    ev = as_evaluable(M)
    rng = np.random.default_rng(715225741)
    best = 0
    for _ in range(samples):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        try:
            best = max(best, _numeric_rank(ev.eval(z)))
        except (AnalysisError, np.linalg.LinAlgError):
            continue
    return best


# ---------------------------------------------------------------------------
# contours and the argument principle


@dataclass(frozen=True)
class Contour:
    """Circle or rectangle contour with quadrature settings."""

    kind: str
    center: complex = 0j
    radius: float = 0.0
    corners: tuple = ()
    tol: float = 1e-8
    max_subdiv: int = 40

    @staticmethod
    def circle(center, radius, tol=1e-8, max_subdiv=40) -> "Contour":
        if radius <= 0:
            raise InputError("circle radius must be positive")
        return Contour(kind="circle", center=complex(center),
                       radius=float(radius), tol=tol, max_subdiv=max_subdiv)

    @staticmethod
    def rectangle(x0, x1, y0, y1, tol=1e-8, max_subdiv=40) -> "Contour":
        if x1 <= x0 or y1 <= y0:
            raise InputError("rectangle must have positive area")
        corners = (complex(x0, y0), complex(x1, y0),
                   complex(x1, y1), complex(x0, y1))
        return Contour(kind="rectangle", corners=corners,
                       tol=tol, max_subdiv=max_subdiv)

    def segments(self):
        """Parametrized pieces (z(t), z'(t)) over t in [0, 1]."""
        if self.kind == "circle":
            c, r = self.center, self.radius

            def zf(t, c=c, r=r):
                return c + r * cmath.exp(2j * math.pi * t)

            def dzf(t, c=c, r=r):
                return 2j * math.pi * r * cmath.exp(2j * math.pi * t)

            return [(zf, dzf)]
        segs = []
        pts = self.corners
        for a, b in zip(pts, pts[1:] + pts[:1]):
            segs.append((lambda t, a=a, b=b: a + (b - a) * t,
                         lambda t, a=a, b=b: b - a))
        return segs

    def boundary_points(self, k: int = 256):
        out = []
        segs = self.segments()
        per = max(1, k // len(segs))
        for zf, _ in segs:
            for i in range(per):
                out.append(zf(i / per))
        return out


@dataclass(frozen=True)
class CountResult:
    """Argument-principle count: zeros minus poles inside the contour."""

    n_minus_p: int
    raw_integral: complex
    residual: float


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl_segment(f, a: float, b: float) -> complex:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    acc = 0j
    for x, w in zip(_GL_NODES, _GL_WEIGHTS):
        acc += w * f(mid + half * x)
    return acc * half


class _SubdivBudget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n


def _adaptive(f, a: float, b: float, tol: float, budget: _SubdivBudget,
              whole=None) -> complex:
    if whole is None:
        whole = _gl_segment(f, a, b)
    mid = 0.5 * (a + b)
    lo = _gl_segment(f, a, mid)
    hi = _gl_segment(f, mid, b)
    if abs(whole - (lo + hi)) <= tol:
        return lo + hi
    if budget.left <= 0:
        raise ConvergenceError("quadrature subdivision budget exhausted")
    budget.left -= 1
    return (_adaptive(f, a, mid, tol / 2, budget, lo)
            + _adaptive(f, mid, b, tol / 2, budget, hi))


def _check_proximity(ev, contour: Contour, samples: int = 256):
    dets = []
    for z in contour.boundary_points(samples):
        try:
            dets.append(abs(np.linalg.det(ev.eval(z))))
        except AnalysisError:
            dets.append(0.0)
    top = max(dets)
    if top == 0.0 or min(dets) <= 1e-10 * top:
        raise ContourError(
            "contour passes too close to a zero or pole "
            f"(min/max boundary |det| = {min(dets):.3g}/{top:.3g})")


def _log_deriv_trace(ev):
    def g(z: complex) -> complex:
        m = ev.eval(z)
        mp = ev.eval_deriv(z)
        return complex(np.trace(np.linalg.solve(m, mp)))

    return g


def count_zeros_minus_poles(M, contour: Contour,
                            check_boundary: bool = True,
                            samples: int = 256) -> CountResult:
    """(1/2πi) ∮ Tr(M^{-1} M') dz, snapped to the nearest integer."""
    ev = as_evaluable(M)
    if ev.shape[0] != ev.shape[1]:
        raise InputError("argument principle needs a square matrix")
    if check_boundary:
        _check_proximity(ev, contour, samples=samples)
    g = _log_deriv_trace(ev)
    budget = _SubdivBudget(2 ** min(contour.max_subdiv, 16))
    total = 0j
    for zf, dzf in contour.segments():
        def f(t, zf=zf, dzf=dzf):
            return g(zf(t)) * dzf(t)

        total += _adaptive(f, 0.0, 1.0, contour.tol, budget)
    raw = total / (2j * math.pi)
    nearest = round(raw.real)
    residual = abs(raw - nearest)
    if residual >= 0.25:
        raise ConvergenceError(
            f"winding integral {raw:.6g} is not close to an integer")
    return CountResult(n_minus_p=int(nearest), raw_integral=raw,
                       residual=residual)


# ---------------------------------------------------------------------------
# root localization


@dataclass
class _Box:
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def diameter(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    def contains(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1


def _box_contour(box: _Box, tol: float) -> Contour:
    return Contour.rectangle(box.x0, box.x1, box.y0, box.y1, tol=tol)


def _count_in_box(ev, box: _Box, tol: float) -> int:
    return count_zeros_minus_poles(ev, _box_contour(box, tol)).n_minus_p


def _newton(ev, start: complex, mult: int, tol: float, max_iter: int = 80):
    g = _log_deriv_trace(ev)
    z = start
    for _ in range(max_iter):
        try:
            gz = g(z)
        except (np.linalg.LinAlgError, AnalysisError):
            return None
        if gz == 0:
            return None
        step = mult / gz
        z = z - step
        if abs(step) < tol:
            return z
    return None


def _verify_cluster(ev, z: complex, mult: int, tol: float,
                    radius: float) -> bool:
    for scale in (1.0, 1.7, 0.6):
        try:
            c = Contour.circle(z, radius * scale, tol=tol)
            _check_proximity(ev, c, samples=64)
            return count_zeros_minus_poles(ev, c,
                                           check_boundary=False).n_minus_p == mult
        except (ContourError, ConvergenceError):
            continue
    return False


def _split_box(ev, box: _Box, tol: float):
    wide = (box.x1 - box.x0) >= (box.y1 - box.y0)
    # nudge the split line away from roots sitting on it
    for frac in (0.5, 0.53, 0.47, 0.58, 0.42, 0.51, 0.49):
        if wide:
            xm = box.x0 + frac * (box.x1 - box.x0)
            lo = _Box(box.x0, xm, box.y0, box.y1)
            hi = _Box(xm, box.x1, box.y0, box.y1)
        else:
            ym = box.y0 + frac * (box.y1 - box.y0)
            lo = _Box(box.x0, box.x1, box.y0, ym)
            hi = _Box(box.x0, box.x1, ym, box.y1)
        try:
            nlo = _count_in_box(ev, lo, tol)
            nhi = _count_in_box(ev, hi, tol)
            return lo, nlo, hi, nhi
        except (ContourError, ConvergenceError):
            continue
    raise ContourError("could not find a clean subdivision line")


def roots_in_region(f, box, tol: float = 1e-8,
                    min_cell: float | None = None) -> list:
    """All zeros of det f inside the rectangle, with multiplicities.

    `box` is (x0, x1, y0, y1). The matrix must be regular and pole-free in
    the region; multiplicities always sum to the region count.
    """
    ev = as_evaluable(f)
    root_box = _Box(*[float(v) for v in box])
    if min_cell is None:
        min_cell = max(tol * 100, 1e-10)
    total = _count_in_box(ev, root_box, tol)
    if total < 0:
        raise InputError("region contains poles; root search needs a "
                         "pole-free matrix")
    found = []
    _locate(ev, root_box, total, tol, min_cell, found)
    got = sum(m for _, m in found)
    if got != total:
        raise AnalysisError(
            f"located multiplicities sum to {got}, region count is {total}")
    return sorted(found, key=lambda rm: (rm[0].real, rm[0].imag))


def _locate(ev, box: _Box, count: int, tol: float, min_cell: float, out):
    if count == 0:
        return
    # try a direct (cluster-aware) Newton hit before subdividing
    radius = min(box.diameter / 3, max(10 * tol, min_cell))
    z = _newton(ev, box.center, count, tol)
    if z is not None and box.contains(z) and _verify_cluster(
            ev, z, count, tol, radius):
        out.append((z, count))
        return
    if box.diameter <= min_cell:
        # unresolved cluster at the floor: report at cell center
        z = _newton(ev, box.center, count, tol) or box.center
        out.append((z, count))
        return
    lo, nlo, hi, nhi = _split_box(ev, box, tol)
    if nlo + nhi != count:
        raise AnalysisError("subdivision counts do not add up")
    _locate(ev, lo, nlo, tol, min_cell, out)
    _locate(ev, hi, nhi, tol, min_cell, out)


# ---------------------------------------------------------------------------
# local indices via block-Toeplitz ranks


def local_indices(M, point, kmax: int = 12, pole_order: int | None = None,
                  rank_hint: int | None = None,
                  radius: float | None = None) -> IndexTuple:
    """Pole-zero index of M at the point from numeric Taylor data.

    Multiplies by (z - point)^s to clear a pole of order s, Taylor-expands
    on a small circle, and reads partial multiplicities off the rank
    increments of nested block-Toeplitz coefficient matrices.
    """
    lam = complex(point)
    if pole_order is None:
        pole_order = _default_pole_order(M, lam)
    s = int(pole_order)
    ev = as_evaluable(M)
    rows, cols = ev.shape
    if rank_hint is None:
        rank_hint = nrank_sampled(ev)
    r = rank_hint
    if radius is None:
        radius = 0.1
    nsamp = 1 << max(8, (kmax + 1).bit_length() + 2)
    # coefficients of (rho w)^s N(lam + rho w) in w: same local exponents,
    # numerically balanced
    theta = 2 * math.pi * np.arange(nsamp) / nsamp
    ws = np.exp(1j * theta)
    vals = np.empty((nsamp, rows, cols), dtype=complex)
    for i, w in enumerate(ws):
        z = lam + radius * w
        vals[i] = ev.eval(z) * (w ** s)
    coeffs = np.fft.fft(vals, axis=0) / nsamp
    # rank thresholds are relative to the largest coefficient overall, so
    # Toeplitz blocks made of pure truncation noise stay rank zero
    scale = float(np.abs(coeffs).max())
    alphas = []
    prev_rank = 0
    for k in range(kmax + 1):
        t = np.zeros(((k + 1) * rows, (k + 1) * cols), dtype=complex)
        for i in range(k + 1):
            for j in range(i + 1):
                t[i * rows:(i + 1) * rows, j * cols:(j + 1) * cols] = \
                    coeffs[i - j]
        rk = _numeric_rank(t, scale=scale)
        delta = rk - prev_rank
        prev_rank = rk
        while len(alphas) < delta:
            alphas.append(k)
        if len(alphas) == r:
            return IndexTuple(point, tuple(a - s for a in alphas))
    raise ConvergenceError(
        f"kmax = {kmax} too small: found {len(alphas)} of {r} indices")


def _default_pole_order(M, lam: complex) -> int:
    if isinstance(M, RatMat):
        best = 0
        for row in M.entries:
            for e in row:
                if not e.den.is_constant:
                    mult = _numeric_multiplicity(e.den, lam)
                    best = max(best, mult)
        return best
    return 0


def _numeric_multiplicity(p: Poly, lam: complex) -> int:
    from .ratmat import _exact_point

    try:
        ex = _exact_point(lam)
        if not p.eval_exact(ex):
            return p.multiplicity_at(ex)
    except InputError:
        pass
    return 0


# ---------------------------------------------------------------------------
# regional coprimeness


def regional_coprime(A, B, box, side: str = "right", tol: float = 1e-8):
    """Pointwise full-rank coprimeness over a rectangle.

    Returns (True, []) or (False, offending points). Candidate points are
    zeros of a random square compression of the stacked matrix, each
    re-checked by numeric rank of the stack itself.
    """
    a, b = as_evaluable(A), as_evaluable(B)
    if side == "right":
        if a.shape[1] != b.shape[1]:
            raise InputError("right coprimeness: column counts differ")
        n = a.shape[1]
        big = a.shape[0] + b.shape[0]

        def stack(z):
            return np.vstack([a.eval(z), b.eval(z)])

        def stack_deriv(z):
            return np.vstack([a.eval_deriv(z), b.eval_deriv(z)])
    elif side == "left":
        if a.shape[0] != b.shape[0]:
            raise InputError("left coprimeness: row counts differ")
        n = a.shape[0]
        big = a.shape[1] + b.shape[1]

        def stack(z):
            return np.hstack([a.eval(z), b.eval(z)]).T

        def stack_deriv(z):
            return np.hstack([a.eval_deriv(z), b.eval_deriv(z)]).T
    else:
        raise InputError(f"unknown side {side!r}")

    rng = np.random.default_rng(911375821)
    for _ in range(6):
        g = rng.standard_normal((n, big)) + 1j * rng.standard_normal((n, big))

        class _Squared:
            shape = (n, n)

            def eval(self, z, g=g):
                return g @ stack(z)

            def eval_deriv(self, z, g=g):
                return g @ stack_deriv(z)

        sq = _Squared()
        try:
            candidates = roots_in_region(sq, box, tol=tol)
        except (ContourError, ConvergenceError, AnalysisError):
            continue
        bad = []
        for z, _ in candidates:
            if _numeric_rank(stack(z)) < n:
                bad.append(z)
        return (not bad), bad
    raise AnalysisError("could not localize rank-drop candidates")


# ---------------------------------------------------------------------------
# time-delay systems


@dataclass(frozen=True)
class TdsData:
    """Data of an LTI time-delay system: constant matrices with exact
    nonnegative delays, orderings per the state/input/output conventions."""

    A0: tuple
    A_delayed: tuple = ()   # ((matrix, tau), ...) with 0 < tau_1 < ...
    B_terms: tuple = ()     # ((matrix, t), ...) with 0 <= t_1 < ...
    C_terms: tuple = ()
    D_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "A0",
                           tuple(tuple(QQ(x) for x in row) for row in self.A0))
        r = len(self.A0)
        if any(len(row) != r for row in self.A0):
            raise InputError("state matrix A0 must be square")
        for name, terms, strict_pos in (("A_delayed", self.A_delayed, True),
                                        ("B_terms", self.B_terms, False),
                                        ("C_terms", self.C_terms, False),
                                        ("D_terms", self.D_terms, False)):
            norm = []
            prev = None
            for mat, tau in terms:
                tau = QQ(tau)
                if strict_pos and tau <= 0:
                    raise InputError(f"{name}: delays must be positive")
                if tau < 0:
                    raise InputError(f"{name}: delays must be nonnegative")
                if prev is not None and tau <= prev:
                    raise InputError(f"{name}: delays must strictly increase")
                prev = tau
                norm.append((tuple(tuple(QQ(x) for x in row) for row in mat),
                             tau))
            object.__setattr__(self, name, tuple(norm))
        for mat, _ in self.A_delayed:
            if len(mat) != r or any(len(row) != r for row in mat):
                raise InputError("delayed state matrices must be r x r")

    @property
    def state_dim(self) -> int:
        return len(self.A0)

    @property
    def input_dim(self) -> int:
        if not self.B_terms:
            return 0
        return len(self.B_terms[0][0][0])

    @property
    def output_dim(self) -> int:
        if not self.C_terms:
            return 0
        return len(self.C_terms[0][0])


def _qp_sum(terms, rows, cols) -> QuasiPolyMat:
    grid = [[QuasiPolyEntry() for _ in range(cols)] for _ in range(rows)]
    for mat, tau in terms:
        if len(mat) != rows or any(len(row) != cols for row in mat):
            raise InputError("inconsistent block dimensions in TDS data")
        for i in range(rows):
            for j in range(cols):
                if mat[i][j]:
                    grid[i][j] = grid[i][j] + QuasiPolyEntry(
                        ((Poly.const(mat[i][j]), tau),))
    return QuasiPolyMat(grid)


def tds_state_block(data: TdsData) -> QuasiPolyMat:
    """A(z) = zI - A0 - sum A_j e^{-tau_j z}."""
    r = data.state_dim
    z = Poly.z()
    grid = [[QuasiPolyEntry() for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            p = (z if i == j else Poly.zero()) - Poly.const(data.A0[i][j])
            terms = [(p, QQ(0))]
            for mat, tau in data.A_delayed:
                terms.append((Poly.const(-mat[i][j]), tau))
            grid[i][j] = QuasiPolyEntry(terms)
    return QuasiPolyMat(grid)


def build_tds_amd(data: TdsData):
    """Assemble the quasipoly AMD [[A, B], [-C, D]] of a TDS."""
    from .sysmat import Amd

    r, n, m = data.state_dim, data.input_dim, data.output_dim
    if n == 0 or m == 0:
        raise InputError("TDS needs at least one input and one output term")
    a = tds_state_block(data)
    b = _qp_sum(data.B_terms, r, n)
    c = _qp_sum(data.C_terms, m, r)
    d = (_qp_sum(data.D_terms, m, n) if data.D_terms
         else QuasiPolyMat.zeros(m, n))
    return Amd(A=a, B=b, C=c, D=d, ring="quasipoly")


def tds_pole_count(data: TdsData, contour: Contour) -> CountResult:
    """Characteristic roots of the TDS inside the contour: argument
    principle on the (holomorphic, hence pole-free) state block."""
    return count_zeros_minus_poles(tds_state_block(data), contour)
