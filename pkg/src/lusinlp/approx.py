"""Approximation drivers: simple functions, Urysohn ramps, dyadic averages, limits."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from ._exact import as_exponent, as_number, as_rational, fmt, is_exact
from .borel import CompactSet, IntervalSet, inner_compact, outer_open
from .curves import (
    CertificateError,
    Curve,
    GridEvidence,
    LusinCertificate,
    PiecewiseAffine,
    Simple,
    certificate_for,
    intersect_certificates,
    simple_certificate,
)
from .lcs import SpaceModel, Vector
from .lpnorm import DEFAULT_TOL, abs_continuity_delta, lp_distance, weak_integral_with_error

__all__ = [
    "ReportRow",
    "ApproxReport",
    "ApproxError",
    "CauchyFailure",
    "uniform_simple_approx",
    "lp_simple_approx",
    "Urysohn",
    "urysohn_1d",
    "continuous_approx_char",
    "dyadic_average",
    "uniform_limit_certificate",
    "LimitResult",
    "MAX_CELLS",
]

MAX_CELLS = 10**6
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ReportRow:
    operation: str
    seminorm: str
    p: object
    param: object  # n or eps
    bound: object
    measured: object
    passed: bool

    HEADER = ("operation", "seminorm", "p", "n_or_eps", "claimed_bound", "measured", "pass")

    def cells(self) -> list[str]:
        return [self.operation, self.seminorm, fmt(self.p), fmt(self.param),
                fmt(self.bound), fmt(self.measured), fmt(self.passed)]


@dataclass
class ApproxReport:
    rows: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def add(self, *args) -> ReportRow:
        row = ReportRow(*args)
        self.rows.append(row)
        return row

    def extend(self, other: "ApproxReport") -> None:
        self.rows += other.rows

    def csv_rows(self) -> list[list[str]]:
        return [list(ReportRow.HEADER)] + [r.cells() for r in self.rows]


class ApproxError(ValueError):
    """The requested accuracy cannot be reached from the available metadata."""


class CauchyFailure(ValueError):
    """A sequence failed its uniform Cauchy check."""

    def __init__(self, level, m, n, t, gap, q, report):
        self.level, self.m, self.n, self.t, self.gap, self.q = level, m, n, t, gap, q
        self.report = report
        super().__init__(
            f"Cauchy check failed at level {level}: q({fmt(q)}) of beta_{m} - beta_{n} "
            f"at t = {fmt(t)} is {fmt(gap)}"
        )


# --------------------------------------------------------------------------
# uniform simple approximation on a Lusin compact


def _cell_pieces(K: CompactSet, a, b) -> list[tuple]:
    """Closed pieces of ``K ∩ [a, b)``, clipped."""
    out = []
    i = max(bisect_right(K._starts, a) - 1, 0)
    while i < len(K.pieces) and K.pieces[i][0] < b:
        lo, hi = K.pieces[i]
        lo2, hi2 = max(lo, a), min(hi, b)
        if lo2 <= hi2 and lo2 < b:
            out.append((lo2, hi2))
        i += 1
    return out


def _pick_delta(c: Curve, cert: LusinCertificate, q, eps):
    """Mesh scale for the uniform approximation of ``c`` on ``cert.K``."""
    lip = c.lipschitz(q)
    delta = None
    if lip is not None:
        delta = ONE if lip == 0 else as_rational(eps) / as_rational(lip)
    elif isinstance(cert.evidence, GridEvidence):
        table = cert.evidence.table(q)
        if table is not None:
            d = table.delta_for(eps)
            delta = None if d is None else as_rational(d)
    if delta is None:
        raise ApproxError(
            f"no mesh achieves eps = {fmt(eps)}: declare a Lipschitz bound or certify the "
            "modulus on a finer grid"
        )
    return min(delta, ONE)


def uniform_simple_approx(c: Curve, cert: LusinCertificate, q, eps, verify_step=None):
    """Simple ``beta`` with ``sup_{t in K} q(gamma(t) - beta(t)) < eps``.

    The partition is uniform with mesh at most delta/2; on discontinuous
    curves the mesh also stays below the smallest gap of K, so no cell
    straddles two pieces of K. Each cell takes the value of the curve at the
    leftmost point of ``cell ∩ K``. The claim is verified on a grid over K.
    """
    eps = as_number(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not cert.measure_ok():
        raise CertificateError("certificate does not meet its measure claim")
    K = cert.K
    if cert.exact and not isinstance(cert.evidence, GridEvidence) and not c.continuous_on(K):
        raise CertificateError("curve is not continuous on the certified compact")
    space = c.space
    delta = _pick_delta(c, cert, q, eps)
    N = math.ceil(2 / delta)
    if not c.continuous:
        gap = K.min_gap()
        if gap is not None:
            N = max(N, math.floor(1 / gap) + 1)
    if N > MAX_CELLS:
        raise ApproxError(f"partition needs {N} cells (cap {MAX_CELLS})")
    zero = space.zero()
    groups: dict = {}
    atoms: dict = {ONE: c(ONE)}
    for k in range(N):
        a, b = Fraction(k, N), Fraction(k + 1, N)
        parts = _cell_pieces(K, a, b)
        if not parts:
            continue
        y = c(parts[0][0])
        for lo, hi in parts:
            if lo < hi:
                groups.setdefault(y, []).append((lo, hi))
            if hi < b:
                atoms[hi] = y
    pieces = tuple((y, IntervalSet.of(ivs)) for y, ivs in groups.items() if y != zero)
    atom_list = tuple((t, y) for t, y in sorted(atoms.items()) if K.contains(t) or t == ONE)
    beta = Simple(pieces, space, atoms=atom_list, name=f"beta({c.name})")
    sup, witness = _grid_sup(c, beta, K, q, verify_step or Fraction(1, 4 * N))
    report = ApproxReport()
    report.add("uniform_simple", space.seminorm_id(q), "", eps, eps, sup, sup < eps)
    report.notes.update(delta=delta, cells=N, witness=witness)
    return beta, report


def _grid_in(K: CompactSet, h: Fraction) -> list[Fraction]:
    pts = []
    for lo, hi in K.pieces:
        pts.append(lo)
        k = math.floor(lo / h) + 1
        while k * h < hi:
            pts.append(k * h)
            k += 1
        if hi > lo:
            pts.append(hi)
    return pts


def _float_columns(curve: Curve, tf: np.ndarray, terms) -> np.ndarray | None:
    """Functional values of ``curve`` at ``tf`` from its exact affine pieces."""
    cols = []
    for _, f in terms:
        ps = curve.scalar_pieces(f)
        if ps is None:
            return None
        starts = np.array([float(a) for a, _, _, _ in ps])
        alpha = np.array([float(a) for _, _, a, _ in ps])
        slope = np.array([float(b) for _, _, _, b in ps])
        idx = np.clip(np.searchsorted(starts, tf, side="right") - 1, 0, len(ps) - 1)
        cols.append(alpha[idx] + slope[idx] * tf)
    return np.stack(cols, axis=1)


def _grid_sup(c: Curve, beta: Simple, K: CompactSet, q, h) -> tuple:
    ts = _grid_in(K, as_rational(h))
    space = c.space

    def exact(t):
        return space.seminorm(q, c(t) - beta(t))

    terms = space.seminorm_terms(q)
    tf = np.array([float(t) for t in ts])
    cv = _float_columns(c, tf, terms) if c.continuous else None
    bv = _float_columns(beta, tf, terms) if cv is not None else None
    if bv is None:
        best, where = 0, None
        for t in ts:
            d = exact(t)
            if d > best or where is None:
                best, where = max(best, d), t
        return best, where
    for t, y in beta._atoms.items():
        i = bisect_left(ts, t)
        if i < len(ts) and ts[i] == t:
            bv[i] = [float(f(y)) for _, f in terms]
    w = np.array([float(wt) for wt, _ in terms])
    d = np.abs(cv - bv) @ w
    # floats pick the candidates; the reported sup is recomputed exactly
    top = float(d.max())
    cand = np.nonzero(d >= top - 1e-9 * (1 + top))[0]
    best, where = -1, None
    for i in cand:
        v = exact(ts[i])
        if v > best:
            best, where = v, ts[i]
    return best, where


# --------------------------------------------------------------------------
# Lp density


def lp_simple_approx(c: Curve, q, p, eps, tol: float = DEFAULT_TOL):
    """Simple ``beta`` with ``||c - beta||_{Lp, q} < eps``.

    Half of ``eps^p`` goes to the complement of a Lusin compact (sized by
    absolute continuity of the integral) and half to a uniform approximation
    on the compact with budget ``eps / 2^(1/p)``.
    """
    eps = as_number(eps)
    p = as_exponent(p)
    if eps <= 0 or p < 1:
        raise ValueError("need eps > 0 and p >= 1")
    report = ApproxReport()
    sid = c.space.seminorm_id(q)
    if isinstance(c, Simple):
        report.add("lp_simple", sid, p, eps, eps, 0, True)
        return c, report
    budget = eps**p / 2
    delta = abs_continuity_delta(c, q, p, budget)
    cert_eps = min(as_rational(delta), ONE)
    cert = certificate_for(c, cert_eps)
    if p == 1 and is_exact(eps):
        theta = as_rational(eps) / 2
    else:
        theta = as_rational(float(eps) / 2 ** (1 / float(p)) * (1 - 1e-12))
    beta, sub = uniform_simple_approx(c, cert, q, theta)
    report.extend(sub)
    d = lp_distance(c, beta, q, p, tol)
    measured = d.value
    ok = float(measured) + d.abs_error_bound < float(eps) if not d.exact else measured < eps
    report.add("lp_simple", sid, p, eps, eps, measured, ok)
    report.notes.update(delta=delta, theta=theta, distance=d)
    return beta, report


# --------------------------------------------------------------------------
# Urysohn ramps and continuous approximation


@dataclass(frozen=True)
class Urysohn:
    """Continuous piecewise-linear ``f`` with ``chi_K <= f <= chi_U``."""

    knots: tuple
    values: tuple

    def __call__(self, t):
        t = as_rational(t)
        k = min(max(bisect_right(self.knots, t) - 1, 0), len(self.knots) - 2)
        a, b = self.knots[k], self.knots[k + 1]
        return self.values[k] + (self.values[k + 1] - self.values[k]) * (t - a) / (b - a)

    @property
    def breakpoints(self) -> tuple:
        return self.knots


def urysohn_1d(K: CompactSet, U: IntervalSet) -> Urysohn:
    """Ramp function equal to 1 on K and 0 off U.

    Within each piece of U the function is 1 on the hull of the K pieces it
    holds and ramps linearly to 0 at the ends of the U piece. A U piece
    touching 0 or 1 is treated as relatively open there, so K may reach the
    domain boundary.
    """
    pts: dict = {}
    used = 0
    for a, b in U.pieces:
        inside = [(lo, hi) for lo, hi in K.pieces if a <= lo and hi <= b]
        if not inside:
            continue
        used += len(inside)
        k_lo, k_hi = inside[0][0], inside[-1][1]
        if (k_lo == a and a != 0) or (k_hi == b and b != 1):
            raise ValueError("zero margin between K and the boundary of U")
        if k_lo > a:
            pts[a] = 0
        pts[k_lo] = 1
        pts[k_hi] = 1
        if k_hi < b:
            pts[b] = 0
    if used != len(K.pieces):
        raise ValueError("K is not contained in the interior of U")
    pts.setdefault(ZERO, 0)
    pts.setdefault(ONE, 0)
    knots = tuple(sorted(pts))
    return Urysohn(knots, tuple(Fraction(pts[t]) for t in knots))


def continuous_approx_char(y0: Vector, A: IntervalSet, n: int, space: SpaceModel, p=1,
                           tol: float = DEFAULT_TOL):
    """Continuous ``alpha_n = f_n * y0`` approximating ``y0 chi_A`` in Lp.

    Checks ``||alpha_n - y0 chi_A||^p <= q(y0)^p / n`` for every active q.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    p = as_exponent(p)
    budget = Fraction(1, 2 * n)
    Kn = inner_compact(A, budget) if A else CompactSet.empty()
    Un = outer_open(A, budget) if A else IntervalSet.empty()
    f = urysohn_1d(Kn, Un)
    alpha = PiecewiseAffine(f.knots, tuple(y0.scale(v) for v in f.values), space,
                            name=f"alpha_{n}")
    target = Simple(((y0, A),), space) if A and y0 != space.zero() else Simple((), space)
    report = ApproxReport()
    for q in space.active:
        d = lp_distance(alpha, target, q, p, tol)
        bound = space.seminorm(q, y0) ** p / Fraction(n)
        if d.exact and is_exact(bound):
            ok = d.integral <= bound
        else:
            ok = float(d.integral) <= float(bound) + d.integral_error
        report.add("urysohn", space.seminorm_id(q), p, n, bound, d.integral, ok)
    report.notes.update(K=Kn, U=Un, f=f)
    return alpha, report


# --------------------------------------------------------------------------
# dyadic averaging


def dyadic_average(c: Curve, n: int, tol: float = DEFAULT_TOL) -> Simple:
    """Cell averages ``2^n int_{I_j} gamma`` on the dyadic cells of level n."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    cells = 2**n
    space = c.space
    groups: dict = {}
    last = space.zero()
    for j in range(cells):
        cell = IntervalSet.interval(Fraction(j, cells), Fraction(j + 1, cells))
        try:
            z, _ = weak_integral_with_error(c, cell, tol)
        except ArithmeticError as exc:
            raise ArithmeticError(f"integration failed on dyadic cell {j} of level {n}: {exc}") from exc
        y = z.scale(cells)
        last = y
        if y != space.zero():
            groups.setdefault(y, []).append(cell.pieces[0])
    pieces = tuple((y, IntervalSet.of(ivs)) for y, ivs in groups.items())
    return Simple(pieces, space, atoms=((ONE, last),), name=f"avg{n}({c.name})")


# --------------------------------------------------------------------------
# uniform limits of simple functions


@dataclass(frozen=True)
class LimitResult:
    curve: Simple
    certificate: LusinCertificate
    report: ApproxReport
    indices: tuple  # N_k per level


def _rep_points(seq: Sequence[Simple], H: CompactSet) -> list[Fraction]:
    """Points of H that see every value the sequence takes on H."""
    cuts = sorted({b for s in seq for b in s.breakpoints()} | {ZERO, ONE})
    pts = set()
    for lo, hi in H.pieces:
        pts.update((lo, hi))
        i = bisect_left(cuts, lo)
        local = [lo] + [x for x in cuts[i:bisect_right(cuts, hi)] if lo < x < hi] + [hi]
        pts.update(local)
        pts.update((u + v) / 2 for u, v in zip(local, local[1:]) if u < v)
    return sorted(pts)


def _exact_gap(a: Simple, b: Simple, q, pts) -> tuple:
    best, where = -1, None
    for t in pts:
        d = a.space.seminorm(q, a(t) - b(t))
        if d > best:
            best, where = d, t
    return best, where


def uniform_limit_certificate(seq: Sequence[Simple], eps_schedule=None, qs=None,
                              depth: int = 20) -> LimitResult:
    """Certify that a finite run of simple functions is uniformly Cauchy on compacts.

    At level k the compact ``H_k`` intersects certificates of every member
    with budgets ``(1/k) / 2^m``. ``N_k`` is the first index whose tail has
    all pairwise sups below ``eps_k`` on H_k; a level fails when even the
    last two members are too far apart. The limit is ``beta_{N_k}`` on
    ``H_k``, later levels overriding earlier ones.
    """
    if not seq:
        raise ValueError("empty sequence")
    space = seq[0].space
    qs = tuple(space.active if qs is None else qs)
    if eps_schedule is None:
        eps_schedule = [Fraction(1, k) for k in range(1, depth + 1)]
    eps_schedule = [as_number(e) for e in eps_schedule]
    if len(eps_schedule) < depth:
        raise ValueError("tolerance schedule shorter than the depth")
    M = len(seq)
    report = ApproxReport()
    indices = []
    Hs = []
    for k in range(1, depth + 1):
        budget = Fraction(1, k)
        certs = [simple_certificate(s, budget / 2 ** (m + 1)) for m, s in enumerate(seq)]
        H = intersect_certificates(certs)
        pts = _rep_points(seq, H.K)
        eps_k = eps_schedule[k - 1]
        N = 0
        worst = 0
        for q in qs:
            Nq, sup_q = _tail_index(seq, q, pts, eps_k)
            N = max(N, Nq)
            worst = max(worst, sup_q)
        if N >= M - 1 and M > 1:
            q_bad = None
            gap, t = -1, None
            for q in qs:
                g, tt = _exact_gap(seq[M - 2], seq[M - 1], q, pts)
                if g > gap:
                    gap, t, q_bad = g, tt, q
            report.add("uniform_limit", space.seminorm_id(q_bad), "", k, eps_k, gap, False)
            raise CauchyFailure(k, M - 1, M, t, gap, q_bad, report)
        indices.append(N)
        Hs.append(H)
        report.add("uniform_limit", ",".join(space.seminorm_id(q) for q in qs), "", k, eps_k,
                   worst, True)
    limit = _assemble_limit(seq, Hs, indices, space)
    final = Hs[-1]
    report.notes.update(measure_bound=Fraction(1, depth), excluded=final.K.excluded_measure)
    return LimitResult(limit, final, report, tuple(i + 1 for i in indices))


def _tail_index(seq, q, pts, eps_k) -> tuple:
    """First (0-based) index whose tail is Cauchy below ``eps_k`` and the tail sup."""
    space = seq[0].space
    terms = space.seminorm_terms(q)
    weights = np.array([float(w) for w, _ in terms])
    stack = np.empty((len(seq), len(pts), len(terms)))
    exact_vals = [[[f(s(t)) for _, f in terms] for t in pts] for s in seq]
    stack[...] = [[[float(v) for v in row] for row in mat] for mat in exact_vals]
    sup = kernels.pairwise_sup(stack, weights)
    M = len(seq)

    def below(a, b):
        g = sup[a, b]
        if abs(g - float(eps_k)) > 1e-9 * (1 + abs(g)):
            return g < float(eps_k)
        ex = max(
            sum(w * abs(x - y) for (w, _), x, y in zip(terms, exact_vals[a][r], exact_vals[b][r]))
            for r in range(len(pts))
        )
        return ex < eps_k

    N = M - 1
    while N > 0 and all(below(N - 1, j) for j in range(N, M)):
        N -= 1
    tail = sup[N:, N:]
    return N, float(tail.max()) if tail.size else 0.0


def _assemble_limit(seq, Hs, indices, space) -> Simple:
    covered = IntervalSet.empty()
    groups: dict = {}
    atoms: dict = {}
    for H, N in reversed(list(zip(Hs, indices))):
        region = H.K.to_intervalset() - covered
        beta = seq[N]
        for y, A in beta.pieces:
            part = A & region
            if part:
                groups.setdefault(y, []).extend(part.pieces)
        for lo, hi in H.K.pieces:
            if not covered.contains(hi) and hi not in atoms:
                atoms[hi] = beta(hi)
        covered = covered | H.K.to_intervalset()
    pieces = tuple((y, IntervalSet.of(ivs)) for y, ivs in groups.items() if y != space.zero())
    return Simple(pieces, space, atoms=tuple(sorted(atoms.items())), name="limit")
