"""Representable curves [0, 1] -> E and their Lusin certificates.

A curve is one of a handful of concrete representations (simple functions,
continuous piecewise-affine paths, user evaluators with declared
breakpoints, the hat path and the delta path in R^R, and finite linear
combinations of these). Representations that are affine between known
breakpoints expose :meth:`Curve.scalar_pieces`, which the quadrature module
uses to integrate exactly.

A :class:`LusinCertificate` pairs a compact set K of near-full measure with
evidence that the curve restricted to K is continuous: structural evidence
for simple functions and continuous representations, a grid-sampled modulus
table otherwise.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from ._exact import as_rational
from .borel import CompactSet, IntervalSet, complement, inner_compact
from .lcs import (
    FiniteDim,
    PointEvals,
    PointwiseSpace,
    SpaceModel,
    Vector,
    hat,
    indicator,
    parse_vector,
)

__all__ = [
    "DomainError",
    "CertificateError",
    "Curve",
    "Simple",
    "PiecewiseAffine",
    "PiecewiseContinuous",
    "HatPath",
    "DeltaPath",
    "CurveSum",
    "constant",
    "zero_curve",
    "left_sample",
    "hat_discretization",
    "ExactEvidence",
    "GridEvidence",
    "ModulusTable",
    "LusinCertificate",
    "Preimage",
    "char_certificate",
    "simple_certificate",
    "certificate_for",
    "verify_exact",
    "certify_restriction",
    "grid_certificate",
    "intersect_certificates",
    "delta_separation",
    "hat_cauchy_gap",
    "delta_preimage",
    "parse_curve",
    "NAMED_EVALUATORS",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class DomainError(ValueError):
    """Evaluation point outside [0, 1]."""


class CertificateError(ValueError):
    """A certificate does not support the requested claim."""


def _merge_affine(parts: Sequence[tuple[object, list]]) -> list:
    """Sum of ``coef * pieces`` over a common refinement of the breakpoints.

    Each entry of ``parts`` is ``(coef, pieces)`` with pieces a sorted list of
    ``(a, b, alpha, beta)`` covering [0, 1].
    """
    if len(parts) == 1:
        coef, ps = parts[0]
        return ps if coef == 1 else [(a, b, coef * al, coef * be) for a, b, al, be in ps]
    pts = sorted({x for _, ps in parts for (a, b, _, _) in ps for x in (a, b)})
    ptr = [0] * len(parts)
    out = []
    for u, v in zip(pts, pts[1:]):
        al = be = 0
        for k, (coef, ps) in enumerate(parts):
            while ps[ptr[k]][1] <= u:
                ptr[k] += 1
            _, _, a_, b_ = ps[ptr[k]]
            al += coef * a_
            be += coef * b_
        out.append((u, v, al, be))
    return out


class Curve:
    """Base class. Subclasses set ``space`` and implement ``_eval``."""

    space: SpaceModel
    continuous: bool = False
    name: str = "curve"

    def __call__(self, t) -> Vector:
        t = as_rational(t)
        if not ZERO <= t <= ONE:
            raise DomainError(f"t = {t} is outside [0, 1]")
        return self._eval(t)

    def _eval(self, t) -> Vector:  # pragma: no cover - abstract
        raise NotImplementedError

    def scalar_pieces(self, f) -> list | None:
        """Exact affine pieces of ``t -> f(gamma(t))`` (almost everywhere).

        Returns a sorted list of ``(a, b, alpha, beta)`` covering [0, 1] such
        that ``f(gamma(t)) = alpha + beta t`` for a.e. t in ``[a, b)``, or None
        when the representation is not piecewise affine.
        """
        return None

    def breakpoints(self) -> list[Fraction]:
        return []

    def lipschitz(self, q):
        """Lipschitz constant in ``q`` on each breakpoint-free segment, or None."""
        return None

    def continuous_on(self, K: CompactSet) -> bool:
        """Structural check that the restriction to K is continuous."""
        return self.continuous

    # curve algebra --------------------------------------------------------

    def __add__(self, other: "Curve") -> "CurveSum":
        return CurveSum.of([(1, self), (1, other)])

    def __sub__(self, other: "Curve") -> "CurveSum":
        return CurveSum.of([(1, self), (-1, other)])

    def __rmul__(self, alpha) -> "CurveSum":
        return CurveSum.of([(alpha, self)])

    def __neg__(self) -> "CurveSum":
        return CurveSum.of([(-1, self)])


@dataclass(frozen=True, eq=False)
class Simple(Curve):
    """``sum_i y_i chi_{A_i} + sum_j z_j chi_{{t_j}}`` with disjoint ``A_i``.

    ``atoms`` holds finitely many point values (null sets) such as the
    ``gamma(1) chi_{{1}}`` term of the uniform approximation; an atom
    overrides the piece value at its point.
    """

    pieces: tuple  # ((Vector, IntervalSet), ...)
    space: SpaceModel
    atoms: tuple = ()  # ((Fraction, Vector), ...)
    name: str = "simple"

    def __post_init__(self):
        flat = []
        for y, A in self.pieces:
            if not isinstance(A, IntervalSet):
                raise TypeError("simple pieces must use IntervalSet")
            flat += [(lo, hi, y) for lo, hi in A.pieces]
        flat.sort(key=lambda r: r[0])
        for (_, hi, _), (lo, _, _) in zip(flat, flat[1:]):
            if lo < hi:
                raise ValueError("simple function pieces must be disjoint")
        object.__setattr__(self, "_flat", flat)
        object.__setattr__(self, "_starts", [r[0] for r in flat])
        object.__setattr__(self, "_atoms", {as_rational(t): y for t, y in self.atoms})

    def value_ae(self, t) -> Vector:
        """Piece value at ``t`` ignoring atoms."""
        i = bisect_right(self._starts, t) - 1
        if i >= 0 and t < self._flat[i][1]:
            return self._flat[i][2]
        return self.space.zero()

    def _eval(self, t) -> Vector:
        if t in self._atoms:
            return self._atoms[t]
        return self.value_ae(t)

    def flat_pieces(self) -> list:
        """Sorted ``(lo, hi, vector)`` triples."""
        return list(self._flat)

    def scalar_pieces(self, f) -> list:
        out = []
        cur = ZERO
        for lo, hi, y in self._flat:
            if lo > cur:
                out.append((cur, lo, 0, 0))
            out.append((lo, hi, f(y), 0))
            cur = hi
        if cur < ONE:
            out.append((cur, ONE, 0, 0))
        return out

    def breakpoints(self) -> list[Fraction]:
        return sorted({x for lo, hi, _ in self._flat for x in (lo, hi)} | set(self._atoms))

    def lipschitz(self, q):
        return 0

    def continuous_on(self, K: CompactSet) -> bool:
        return verify_exact(self, K)


def constant(y0: Vector, space: SpaceModel) -> Simple:
    """The constant curve ``t -> y0`` (including t = 1)."""
    if y0 == space.zero():
        return zero_curve(space)
    return Simple(((y0, IntervalSet.full()),), space, atoms=((ONE, y0),), name="constant")


def zero_curve(space: SpaceModel) -> Simple:
    return Simple((), space, name="zero")


@dataclass(frozen=True, eq=False)
class PiecewiseAffine(Curve):
    """Continuous curve interpolating ``values`` linearly between ``knots``."""

    knots: tuple
    values: tuple
    space: SpaceModel
    name: str = "affine"
    continuous = True

    def __post_init__(self):
        knots = tuple(as_rational(t) for t in self.knots)
        if len(knots) < 2 or knots[0] != 0 or knots[-1] != 1:
            raise ValueError("knots must start at 0 and end at 1")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError("knots must be strictly increasing")
        if len(self.values) != len(knots):
            raise ValueError("one value per knot required")
        object.__setattr__(self, "knots", knots)

    def _eval(self, t) -> Vector:
        k = min(bisect_right(self.knots, t) - 1, len(self.knots) - 2)
        a, b = self.knots[k], self.knots[k + 1]
        lam = (t - a) / (b - a)
        return self.values[k] + (self.values[k + 1] - self.values[k]).scale(lam)

    def scalar_pieces(self, f) -> list:
        out = []
        for k in range(len(self.knots) - 1):
            a, b = self.knots[k], self.knots[k + 1]
            fa, fb = f(self.values[k]), f(self.values[k + 1])
            beta = (fb - fa) / (b - a)
            out.append((a, b, fa - beta * a, beta))
        return out

    def breakpoints(self) -> list[Fraction]:
        return list(self.knots)

    def lipschitz(self, q):
        return max(
            self.space.seminorm(q, self.values[k + 1] - self.values[k])
            / (self.knots[k + 1] - self.knots[k])
            for k in range(len(self.knots) - 1)
        )


@dataclass(frozen=True, eq=False)
class PiecewiseContinuous(Curve):
    """Curve given by a Python evaluator, continuous between ``breaks``.

    ``lip`` maps seminorm indices to Lipschitz constants valid on each
    breakpoint-free subinterval. Both are trusted declarations.
    """

    evaluator: Callable
    space: SpaceModel
    breaks: tuple = ()
    lip: dict = field(default_factory=dict)
    name: str = "pw"

    def __post_init__(self):
        object.__setattr__(self, "breaks", tuple(sorted(as_rational(b) for b in self.breaks)))
        object.__setattr__(self, "continuous", not self.breaks)

    def _eval(self, t) -> Vector:
        return self.evaluator(t)

    def breakpoints(self) -> list[Fraction]:
        return list(self.breaks)

    def lipschitz(self, q):
        return self.lip.get(q)

    def continuous_on(self, K: CompactSet) -> bool:
        return not any(K.contains(b) for b in self.breaks)


@dataclass(frozen=True, eq=False)
class HatPath(Curve):
    """``t -> Hat(t, n)`` in R^R: a bump of half-width 1/n travelling along [0, 1]."""

    n: int
    space: PointwiseSpace
    name: str = "hat_path"
    continuous = True

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("steepness must be positive")
        if not isinstance(self.space, PointwiseSpace):
            raise TypeError("HatPath lives in a PointwiseSpace")
        object.__setattr__(self, "n", as_rational(self.n))

    def _eval(self, t) -> Vector:
        return hat(t, self.n)

    def _pieces_at(self, x) -> list:
        n = self.n
        lo, hi = x - 1 / n, x + 1 / n
        pts = sorted({ZERO, ONE} | {p for p in (lo, x, hi) if ZERO < p < ONE})
        out = []
        for a, b in zip(pts, pts[1:]):
            if b <= lo or a >= hi:
                out.append((a, b, 0, 0))
            elif b <= x:
                out.append((a, b, 1 - n * x, n))
            else:
                out.append((a, b, 1 + n * x, -n))
        return out

    def scalar_pieces(self, f) -> list | None:
        if not isinstance(f, PointEvals):
            return None
        return _merge_affine([(c, self._pieces_at(x)) for x, c in f.terms])

    def breakpoints(self) -> list[Fraction]:
        pts = set()
        for x in self.space.points:
            pts |= {p for p in (x - 1 / self.n, x, x + 1 / self.n) if ZERO <= p <= ONE}
        return sorted(pts)

    def lipschitz(self, q):
        return self.n


@dataclass(frozen=True, eq=False)
class DeltaPath(Curve):
    """``t -> indicator of {t}``: the pointwise limit of the hat paths."""

    space: PointwiseSpace
    name: str = "delta_path"

    def _eval(self, t) -> Vector:
        return indicator(t)

    def scalar_pieces(self, f) -> list | None:
        if not isinstance(f, PointEvals):
            return None
        # pi_x(delta_t) = chi_{x}(t) vanishes off a single point
        return [(ZERO, ONE, 0, 0)]

    def continuous_on(self, K: CompactSet) -> bool:
        # continuity forces K to be discrete, hence finite
        return all(lo == hi for lo, hi in K.pieces)


@dataclass(frozen=True, eq=False)
class CurveSum(Curve):
    """Finite linear combination ``sum_k c_k gamma_k``."""

    terms: tuple
    space: SpaceModel
    name: str = "sum"

    @classmethod
    def of(cls, terms: Iterable[tuple[object, Curve]]) -> "CurveSum":
        flat = []
        space = None
        for c, g in terms:
            if space is None:
                space = g.space
            elif g.space != space:
                raise ValueError("cannot combine curves from different spaces")
            if isinstance(g, CurveSum):
                flat += [(c * c2, g2) for c2, g2 in g.terms]
            else:
                flat.append((c, g))
        return cls(tuple(flat), space)

    def __post_init__(self):
        object.__setattr__(self, "continuous", all(g.continuous for _, g in self.terms))

    def _eval(self, t) -> Vector:
        out = self.space.zero()
        for c, g in self.terms:
            out = out + g._eval(t).scale(c)
        return out

    def scalar_pieces(self, f) -> list | None:
        if not self.terms:
            return [(ZERO, ONE, 0, 0)]
        parts = []
        for c, g in self.terms:
            ps = g.scalar_pieces(f)
            if ps is None:
                return None
            parts.append((c, ps))
        return _merge_affine(parts)

    def breakpoints(self) -> list[Fraction]:
        return sorted({b for _, g in self.terms for b in g.breakpoints()})

    def lipschitz(self, q):
        total = 0
        for c, g in self.terms:
            L = g.lipschitz(q)
            if L is None:
                return None
            total += abs(c) * L
        return total

    def continuous_on(self, K: CompactSet) -> bool:
        return all(g.continuous_on(K) for _, g in self.terms)


# --------------------------------------------------------------------------
# discretizations


def left_sample(c: Curve, cells: int) -> Simple:
    """Simple curve equal to ``c(k/cells)`` on each ``[k/cells, (k+1)/cells)``."""
    pieces = []
    for k in range(cells):
        y = c(Fraction(k, cells))
        if y != c.space.zero():
            pieces.append((y, IntervalSet(((Fraction(k, cells), Fraction(k + 1, cells)),))))
    return Simple(tuple(pieces), c.space, atoms=((ONE, c(ONE)),), name=f"sample({c.name})")


def hat_discretization(n: int, cells: int, space: PointwiseSpace) -> Simple:
    """Left-endpoint simple discretization of ``HatPath(n)``.

    Each piece carries a hat centred at the sample point rather than at t, so
    consecutive members of a sequence of these disagree near every x.
    """
    return left_sample(HatPath(n, space), cells)


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ExactEvidence:
    reason: str = "structural"


@dataclass(frozen=True)
class ModulusTable:
    """Sampled modulus of continuity of ``gamma|K`` in one seminorm.

    ``moduli[b]`` is the max of ``q(gamma(s) - gamma(t))`` over sampled
    ``s, t`` in K with ``|s - t| <= deltas[b]``. ``exact`` marks tables
    computed structurally rather than from a grid; they hold the modulus
    within pieces of K, which is the true modulus for distances below
    ``reach`` (the smallest gap between pieces).
    """

    q: object
    h: Fraction
    deltas: tuple
    moduli: tuple
    points: int
    exact: bool = False
    reach: Fraction | None = None

    def delta_for(self, eps) -> float | None:
        """Largest bucket whose modulus is below ``eps``."""
        ok = [d for d, m in zip(self.deltas, self.moduli)
              if m < eps and (self.reach is None or d < self.reach)]
        if ok:
            return max(ok)
        if self.reach is not None and all(m < eps for m in self.moduli):
            return self.reach / 2
        return None


@dataclass(frozen=True)
class GridEvidence:
    h: Fraction
    tables: tuple  # ModulusTable per seminorm

    def table(self, q) -> ModulusTable | None:
        for t in self.tables:
            if t.q == q:
                return t
        return None


@dataclass(frozen=True)
class LusinCertificate:
    """Compact K with ``measure([0,1] \\ K) < eps`` plus continuity evidence."""

    K: CompactSet
    eps: Fraction
    evidence: object = ExactEvidence()

    def measure_ok(self) -> bool:
        gap = self.K.excluded_measure
        if self.eps == 0:
            return gap == 0
        return gap < self.eps

    @property
    def exact(self) -> bool:
        ev = self.evidence
        if isinstance(ev, tuple):
            return all(isinstance(e, ExactEvidence) for e in ev)
        return isinstance(ev, ExactEvidence)


def char_certificate(y0: Vector, A: IntervalSet, eps) -> LusinCertificate:
    """Certificate for ``t -> y0 chi_A(t)``.

    K is the union of a closed inner approximation of A and one of its
    complement, each with budget eps/2. The two parts are separated by a
    positive gap, so ``A ∩ K`` is open and closed in K.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    F1 = inner_compact(A, eps / 2) if A else CompactSet.empty()
    Ac = complement(A)
    F2 = inner_compact(Ac, eps / 2) if Ac else CompactSet.empty()
    K = CompactSet(tuple(sorted(F1.pieces + F2.pieces)))
    cert = LusinCertificate(K, eps, ExactEvidence("indicator"))
    assert cert.measure_ok()
    return cert


def simple_certificate(c: Simple, eps) -> LusinCertificate:
    """Certificate for a simple curve with several pieces."""
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if verify_exact(c, CompactSet.full()):
        return LusinCertificate(CompactSet.full(), eps, ExactEvidence("constant"))
    sets = [A for _, A in c.pieces if A]
    covered = IntervalSet.of(p for A in sets for p in A.pieces)
    rest = complement(covered)
    if rest:
        sets.append(rest)
    if not sets:
        return LusinCertificate(CompactSet.empty(), eps)
    budget = eps / len(sets)
    pieces = [p for A in sets for p in inner_compact(A, budget).pieces]
    K = CompactSet(tuple(sorted(pieces)))
    cert = LusinCertificate(K, eps, ExactEvidence("simple"))
    assert cert.measure_ok()
    return cert


def verify_exact(c: Simple, K: CompactSet) -> bool:
    """Open-and-closed test: c is constant on every non-degenerate piece of K.

    Then each ``K ∩ A_i`` is a union of whole pieces of K. Atoms inside a
    piece must carry the piece value; isolated points of K are free.
    """
    bps = c.breakpoints()
    for a, b in K.pieces:
        if a == b:
            continue
        y = c(a)
        i = bisect_right(bps, a)
        while i < len(bps) and bps[i] <= b:
            x = bps[i]
            if c(x) != y or (x < b and c.value_ae(x) != y):
                return False
            i += 1
    return True


def certificate_for(c: Curve, eps, h=None) -> LusinCertificate:
    """Build a Lusin certificate for any representable curve.

    Continuous representations get ``K = [0, 1]``. Curves with declared
    breakpoints lose small open neighbourhoods of them. Delta paths have no
    certificate.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(c, Simple):
        return simple_certificate(c, eps)
    if isinstance(c, DeltaPath):
        raise CertificateError("the delta path is not Lusin-measurable")
    if c.continuous:
        return LusinCertificate(CompactSet.full(), eps, ExactEvidence("continuous"))
    if isinstance(c, CurveSum):
        parts = [certificate_for(g, eps / (2 * len(c.terms)), h) for _, g in c.terms]
        merged = intersect_certificates(parts)
        return LusinCertificate(merged.K, eps, merged.evidence)
    # generic piecewise-continuous evaluator
    bps = c.breakpoints()
    r = eps / (4 * (len(bps) + 1))
    holes = IntervalSet.of((max(ZERO, b - r), min(ONE, b + r)) for b in bps)
    K = CompactSet.of((lo, hi) for lo, hi in complement(holes).pieces)
    K = CompactSet.of((lo, hi) for lo, hi in K.pieces if not any(lo == b or hi == b for b in bps))
    K = _avoid_points(K, bps)
    ev = ExactEvidence("breakpoints removed")
    cert = LusinCertificate(K, eps, ev)
    if h is not None:
        tables = tuple(certify_restriction(c, K, q, h) for q in c.space.active)
        cert = LusinCertificate(K, eps, GridEvidence(as_rational(h), tables))
    assert cert.measure_ok()
    return cert


def _avoid_points(K: CompactSet, pts) -> CompactSet:
    return CompactSet(tuple(p for p in K.pieces if not any(p[0] <= b <= p[1] for b in pts)))


def _sample_matrix(c: Curve, ts, q) -> tuple[np.ndarray, np.ndarray]:
    terms = c.space.seminorm_terms(q)
    weights = np.array([float(w) for w, _ in terms])
    vals = np.empty((len(ts), len(terms)))
    for i, t in enumerate(ts):
        y = c(t)
        for j, (_, f) in enumerate(terms):
            vals[i, j] = float(f(y))
    return weights, vals


def _default_deltas(h: Fraction) -> tuple:
    out = []
    d = h
    while d <= Fraction(1, 2):
        out.append(d)
        d *= 2
    return tuple(out) or (h,)


def certify_restriction(c: Curve, K: CompactSet, q, h, deltas=None) -> ModulusTable:
    """Modulus table of ``c|K`` in seminorm ``q`` on a grid of step ``h``.

    For simple curves whose open-and-closed condition holds on K no grid is
    used: the curve is constant on each piece of K, so the modulus within
    pieces is 0 in every bucket, and ``reach`` records the gap below which
    that is the whole story.
    """
    h = as_rational(h)
    if h <= 0:
        raise ValueError("grid step must be positive")
    deltas = tuple(as_rational(d) for d in (deltas or _default_deltas(h)))
    c.space.seminorm_terms(q)  # validates q
    if isinstance(c, Simple) and verify_exact(c, K):
        return ModulusTable(q, h, deltas, tuple(0 for _ in deltas), 0, exact=True,
                            reach=K.min_gap())
    ts = _grid_in(K, h)
    if len(ts) < 2:
        return ModulusTable(q, h, deltas, tuple(0.0 for _ in deltas), len(ts))
    weights, vals = _sample_matrix(c, ts, q)
    tarr = np.array([float(t) for t in ts])
    # grid distances such as 0.525 - 0.5 round above 1/40; widen the buckets a hair
    edges = np.array([float(d) for d in deltas]) * (1 + 1e-9)
    moduli = kernels.pair_modulus(tarr, vals, weights, edges)
    return ModulusTable(q, h, deltas, tuple(float(m) for m in moduli), len(ts))


def _grid_in(K: CompactSet, h: Fraction) -> list[Fraction]:
    pts = set()
    for lo, hi in K.pieces:
        pts.add(lo)
        pts.add(hi)
        k = math.ceil(lo / h)
        while k * h <= hi:
            pts.add(k * h)
            k += 1
    return sorted(pts)


def grid_certificate(c: Curve, K: CompactSet, eps, h) -> LusinCertificate:
    """Certificate whose evidence is a modulus table for every active seminorm."""
    h = as_rational(h)
    tables = tuple(certify_restriction(c, K, q, h) for q in c.space.active)
    cert = LusinCertificate(K, as_rational(eps), GridEvidence(h, tables))
    if not cert.measure_ok():
        raise CertificateError("K does not meet the measure claim")
    return cert


def intersect_certificates(certs: Sequence[LusinCertificate]) -> LusinCertificate:
    """Common compact for several certificates; budgets add up."""
    if not certs:
        return LusinCertificate(CompactSet.full(), ZERO, ExactEvidence("empty intersection"))
    K = certs[0].K
    for c in certs[1:]:
        K = K.intersect(c.K)
    eps = sum((c.eps for c in certs), ZERO)
    bound = sum((c.K.excluded_measure for c in certs), ZERO)
    if not K.excluded_measure <= bound:
        raise AssertionError("subadditivity violated")  # cannot happen
    out = LusinCertificate(K, eps, tuple(c.evidence for c in certs))
    if not out.measure_ok():
        raise CertificateError("intersected certificate misses its measure bound")
    return out


# --------------------------------------------------------------------------
# the two pathologies


def delta_separation(s, s2) -> Fraction:
    """``q_s(delta_s - delta_s')``, which is 1 whenever ``s != s'``."""
    s, s2 = as_rational(s), as_rational(s2)
    if s == s2:
        raise ValueError("separation needs two distinct points")
    space = PointwiseSpace.at(s)
    return space.seminorm(s, indicator(s) - indicator(s2))


def hat_cauchy_gap(n: int, m: int, x) -> Fraction:
    """``q_x(gamma_m(t) - gamma_n(t))`` at ``t = x + 1/(2n)`` for the hat paths."""
    x = as_rational(x)
    if n <= 0 or m <= 0:
        raise ValueError("n and m must be positive")
    if m < 2 * n:
        raise ValueError("need m >= 2n")
    t = x + Fraction(1, 2 * n)
    if not (ZERO < x < ONE and ZERO < t < ONE):
        raise ValueError("need x and x + 1/(2n) in (0, 1)")
    space = PointwiseSpace.at(x)
    gap = space.seminorm(x, HatPath(m, space)(t) - HatPath(n, space)(t))
    expected = abs(max(1 - Fraction(m, 2 * n), ZERO) - Fraction(1, 2))
    assert gap == expected, (gap, expected)
    return gap


@dataclass(frozen=True)
class Preimage:
    """A finite or cofinite subset of [0, 1]."""

    kind: str  # "finite" or "cofinite"
    points: frozenset

    @property
    def measure(self) -> Fraction:
        return ZERO if self.kind == "finite" else ONE

    def describe(self) -> str:
        pts = ";".join(str(p) for p in sorted(self.points))
        if self.kind == "finite":
            return "{" + pts + "}" if pts else "empty"
        return "[0,1] minus {" + pts + "}" if pts else "[0,1]"


def delta_preimage(coords: Sequence, intervals: Sequence[tuple]) -> Preimage:
    """Preimage under the delta path of ``∩_i pi_{x_i}^{-1}(U_i)``.

    Each ``U_i = (lo_i, hi_i)`` is an open interval. The coordinate map
    ``t -> delta_t(x_i)`` only takes the values 0 and 1, so each factor of
    the preimage is empty, ``{x_i}``, ``[0, 1] \\ {x_i}`` or everything.
    """
    state = Preimage("cofinite", frozenset())
    for x, (lo, hi) in zip(coords, intervals):
        x, lo, hi = as_rational(x), as_rational(lo), as_rational(hi)
        has_one = lo < 1 < hi
        has_zero = lo < 0 < hi
        inside = ZERO <= x <= ONE
        if has_one and has_zero:
            continue
        if has_one:
            part = Preimage("finite", frozenset([x]) if inside else frozenset())
        elif has_zero:
            part = Preimage("cofinite", frozenset([x]) if inside else frozenset())
        else:
            part = Preimage("finite", frozenset())
        state = _meet(state, part)
    return state


def _meet(a: Preimage, b: Preimage) -> Preimage:
    if a.kind == "finite" and b.kind == "finite":
        return Preimage("finite", a.points & b.points)
    if a.kind == "finite":
        return Preimage("finite", a.points - b.points)
    if b.kind == "finite":
        return Preimage("finite", b.points - a.points)
    return Preimage("cofinite", a.points | b.points)


# --------------------------------------------------------------------------
# config literals


def _linear(space: SpaceModel, axis: int = 0, slope=1):
    if not isinstance(space, FiniteDim):
        raise ValueError("linear curve needs a finite-dimensional space")
    e = space.basis(axis).scale(as_rational(slope))
    return PiecewiseAffine((0, 1), (space.zero(), e), space, name="linear")


def _sine(space: SpaceModel, axis: int = 0, freq=1):
    if not isinstance(space, FiniteDim):
        raise ValueError("sine curve needs a finite-dimensional space")
    w = 2 * math.pi * float(freq)

    def ev(t):
        return space.basis(axis).scale(math.sin(w * float(t)))

    lip = {i: w * float(space.weights[i][axis]) for i in space.active}
    return PiecewiseContinuous(ev, space, (), lip, name="sine")


def _jump(space: SpaceModel, axis: int = 0, at="1/2"):
    if not isinstance(space, FiniteDim):
        raise ValueError("jump curve needs a finite-dimensional space")
    b = as_rational(at)

    def ev(t):
        return space.basis(axis).scale(t + (1 if t >= b else 0))

    lip = {i: space.weights[i][axis] for i in space.active}
    return PiecewiseContinuous(ev, space, (b,), lip, name="jump")


NAMED_EVALUATORS: dict[str, Callable[..., Curve]] = {
    "linear": _linear,
    "sine": _sine,
    "jump": _jump,
}


def parse_curve(lit, space: SpaceModel) -> Curve:
    """Build a curve from a config literal (see the README for the forms)."""
    if not isinstance(lit, dict) or len(lit) != 1:
        raise ValueError(f"bad curve literal {lit!r}")
    (kind, body), = lit.items()
    if kind == "simple":
        pieces = tuple(
            (parse_vector(v, space), IntervalSet.from_json(s)) for v, s in body
        )
        return Simple(pieces, space)
    if kind == "const":
        return constant(parse_vector(body, space), space)
    if kind == "zero":
        return zero_curve(space)
    if kind == "hat_path":
        return HatPath(int(body), space)
    if kind == "delta_path":
        return DeltaPath(space)
    if kind == "affine":
        vals = tuple(parse_vector(v, space) for v in body["values"])
        return PiecewiseAffine(tuple(body["knots"]), vals, space)
    if kind == "pw":
        name = body["name"]
        if name not in NAMED_EVALUATORS:
            raise ValueError(f"unknown evaluator {name!r}")
        curve = NAMED_EVALUATORS[name](space, **body.get("params", {}))
        if "breaks" in body or "lip" in body:
            if not isinstance(curve, PiecewiseContinuous):
                curve = PiecewiseContinuous(curve.__call__, space, (), {}, name=name)
            lip = dict(curve.lip)
            for k, v in body.get("lip", {}).items():
                lip[space.parse_index(k)] = as_rational(v)
            curve = PiecewiseContinuous(
                curve.evaluator, space, tuple(body.get("breaks", curve.breaks)), lip, name=name
            )
        return curve
    if kind == "sum":
        return CurveSum.of((as_rational(c), parse_curve(g, space)) for c, g in body)
    raise ValueError(f"unknown curve literal kind {kind!r}")
