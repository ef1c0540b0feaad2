"""Seminorm-family models of locally convex spaces.

Two concrete models are provided:

``FiniteDim``
    R^d with a family of weighted absolute coordinate forms
    ``q_i(v) = sum_j w_ij |v_j|``.

``PointwiseSpace``
    The product space R^R restricted to the finite span of hat and point
    indicator functions, with seminorms ``q_x(f) = |f(x)|``. Only finitely
    many evaluation points are ever active; computations never range over
    the whole family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from ._exact import as_number, as_rational

__all__ = [
    "SpaceMismatch",
    "UnknownSeminorm",
    "Hat",
    "Indicator",
    "Vector",
    "CoordVector",
    "PointVector",
    "FiniteDim",
    "PointwiseSpace",
    "SpaceModel",
    "Functional",
    "CoordForm",
    "PointEvals",
    "seminorm_eval",
    "vec_add",
    "vec_scale",
    "vec_eval",
    "functional_apply",
    "evaluation",
    "coordinate",
    "hat",
    "indicator",
    "parse_vector",
]


class SpaceMismatch(TypeError):
    """Vectors or functionals from different space models were combined."""


class UnknownSeminorm(KeyError):
    """A seminorm index is not among the space's active indices."""


# --------------------------------------------------------------------------
# R^R primitives


@dataclass(frozen=True, order=True)
class Hat:
    """``x -> max(1 - n |x - c|, 0)``."""

    c: Fraction
    n: Fraction

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("hat steepness must be positive")

    def __call__(self, x):
        v = 1 - self.n * abs(x - self.c)
        return v if v > 0 else 0 * v

    @property
    def key(self):
        return (1, self.c, self.n)


@dataclass(frozen=True, order=True)
class Indicator:
    """Indicator of the single point ``x0``."""

    x0: Fraction

    def __call__(self, x):
        return 1 if x == self.x0 else 0

    @property
    def key(self):
        return (0, self.x0, 0)


Primitive = Union[Hat, Indicator]


def hat(c, n) -> "PointVector":
    return PointVector(((Hat(as_rational(c), as_rational(n)), Fraction(1)),))


def indicator(x0) -> "PointVector":
    return PointVector(((Indicator(as_rational(x0)), Fraction(1)),))


# --------------------------------------------------------------------------
# vectors


class Vector:
    """Common base for the two vector representations."""

    __slots__ = ()

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, alpha):
        return self.scale(alpha)

    def __mul__(self, alpha):
        return self.scale(alpha)


@dataclass(frozen=True)
class CoordVector(Vector):
    coords: tuple

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __add__(self, other):
        if not isinstance(other, CoordVector) or other.dim != self.dim:
            raise SpaceMismatch("cannot add vectors from different spaces")
        return CoordVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, alpha):
        return CoordVector(tuple(alpha * a for a in self.coords))

    def __call__(self, j):
        return self.coords[int(j)]

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)


@dataclass(frozen=True)
class PointVector(Vector):
    """Finite linear combination of :class:`Hat` / :class:`Indicator` primitives.

    ``terms`` is kept normalized: sorted by primitive, duplicates merged and
    zero coefficients dropped, so equal combinations compare equal.
    """

    terms: tuple = ()

    @classmethod
    def combine(cls, terms: Iterable[tuple[Primitive, object]]) -> "PointVector":
        acc: dict = {}
        for prim, coeff in terms:
            acc[prim] = acc.get(prim, 0) + coeff
        items = [(p, c) for p, c in acc.items() if c != 0]
        items.sort(key=lambda pc: pc[0].key)
        return cls(tuple(items))

    def __add__(self, other):
        if not isinstance(other, PointVector):
            raise SpaceMismatch("cannot add vectors from different spaces")
        if not other.terms:
            return self
        if not self.terms:
            return other
        return PointVector.combine(self.terms + other.terms)

    def scale(self, alpha):
        if alpha == 0:
            return PointVector(())
        return PointVector(tuple((p, alpha * c) for p, c in self.terms))

    def __call__(self, x):
        x = as_rational(x)
        return sum((c * p(x) for p, c in self.terms), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def kinks(self) -> list:
        """Points where the function x -> v(x) is not smooth."""
        out = []
        for p, _ in self.terms:
            if isinstance(p, Hat):
                out += [p.c - 1 / p.n, p.c, p.c + 1 / p.n]
            else:
                out.append(p.x0)
        return out


# --------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class CoordForm:
    """Dual pairing ``v -> sum_j c_j v_j`` on a :class:`FiniteDim` space."""

    coeffs: tuple

    def __call__(self, v) -> object:
        if not isinstance(v, CoordVector) or v.dim != len(self.coeffs):
            raise SpaceMismatch("functional and vector live in different spaces")
        return sum((c * a for c, a in zip(self.coeffs, v.coords) if c != 0), 0)


@dataclass(frozen=True)
class PointEvals:
    """Finite combination ``sum_k c_k pi_{x_k}`` of point evaluations on R^R."""

    terms: tuple  # ((x, c), ...)

    def __call__(self, v) -> object:
        if not isinstance(v, PointVector):
            raise SpaceMismatch("functional and vector live in different spaces")
        return sum((c * v(x) for x, c in self.terms), 0)

    @property
    def point(self):
        """The evaluation point if this is a single unit evaluation."""
        if len(self.terms) == 1 and self.terms[0][1] == 1:
            return self.terms[0][0]
        return None


Functional = Union[CoordForm, PointEvals]


def evaluation(x, coeff=1) -> PointEvals:
    return PointEvals(((as_rational(x), coeff),))


def coordinate(j: int, dim: int) -> CoordForm:
    return CoordForm(tuple(1 if k == j else 0 for k in range(dim)))


def functional_apply(f: Functional, v: Vector):
    return f(v)


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class FiniteDim:
    """R^d with seminorms ``q_i(v) = sum_j w_ij |v_j|``."""

    dim: int
    weights: tuple  # one weight row per seminorm
    active: tuple = None

    def __post_init__(self):
        for row in self.weights:
            if len(row) != self.dim or any(w < 0 for w in row):
                raise ValueError("seminorm weights must be nonnegative rows of length dim")
        if self.active is None:
            object.__setattr__(self, "active", tuple(range(len(self.weights))))
        for i in self.active:
            if not 0 <= i < len(self.weights):
                raise ValueError(f"active index {i} has no seminorm")

    @classmethod
    def coordinates(cls, dim: int) -> "FiniteDim":
        """The Hausdorff family of absolute coordinate seminorms."""
        rows = tuple(tuple(1 if k == j else 0 for k in range(dim)) for j in range(dim))
        return cls(dim, rows)

    def zero(self) -> CoordVector:
        return CoordVector((0,) * self.dim)

    def vector(self, *coords) -> CoordVector:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates")
        return CoordVector(tuple(as_number(c) for c in coords))

    def basis(self, j: int) -> CoordVector:
        return CoordVector(tuple(1 if k == j else 0 for k in range(self.dim)))

    def _check(self, i):
        if i not in self.active:
            raise UnknownSeminorm(f"seminorm {i!r} is not active in this space")

    def seminorm(self, i, v: CoordVector):
        self._check(i)
        if not isinstance(v, CoordVector) or v.dim != self.dim:
            raise SpaceMismatch("vector does not belong to this space")
        return sum((w * abs(a) for w, a in zip(self.weights[i], v.coords) if w != 0), 0)

    def seminorm_terms(self, i) -> list[tuple[object, CoordForm]]:
        """Write ``q_i`` as ``sum_j w_j |f_j(.)|`` with linear ``f_j``."""
        self._check(i)
        return [(w, coordinate(j, self.dim)) for j, w in enumerate(self.weights[i]) if w != 0]

    def generating_functionals(self) -> list[CoordForm]:
        return [coordinate(j, self.dim) for j in range(self.dim)]

    def from_functional_values(self, values) -> CoordVector:
        return CoordVector(tuple(values))

    def dominates(self, i, f: Functional) -> bool:
        """True iff ``|f(v)| <= q_i(v)`` for every v."""
        self._check(i)
        if not isinstance(f, CoordForm) or len(f.coeffs) != self.dim:
            return False
        return all(abs(c) <= w for c, w in zip(f.coeffs, self.weights[i]))

    def seminorm_id(self, i) -> str:
        return f"q{i}"

    def parse_index(self, raw):
        return int(raw)


@dataclass(frozen=True)
class PointwiseSpace:
    """R^R with active evaluation seminorms ``q_x(f) = |f(x)|``."""

    points: tuple

    def __post_init__(self):
        pts = tuple(sorted(set(as_rational(x) for x in self.points)))
        object.__setattr__(self, "points", pts)

    @classmethod
    def at(cls, *xs) -> "PointwiseSpace":
        return cls(tuple(xs))

    @property
    def active(self) -> tuple:
        return self.points

    def zero(self) -> PointVector:
        return PointVector(())

    def _check(self, x):
        if as_rational(x) not in self.points:
            raise UnknownSeminorm(f"q_{x} is not an active seminorm of this space")

    def seminorm(self, x, v: PointVector):
        self._check(x)
        if not isinstance(v, PointVector):
            raise SpaceMismatch("vector does not belong to this space")
        return abs(v(as_rational(x)))

    def seminorm_terms(self, x) -> list[tuple[object, PointEvals]]:
        self._check(x)
        return [(1, evaluation(x))]

    def generating_functionals(self) -> list[PointEvals]:
        return [evaluation(x) for x in self.points]

    def from_functional_values(self, values) -> PointVector:
        """Indicator combination taking ``values`` at the active points."""
        return PointVector.combine((Indicator(x), v) for x, v in zip(self.points, values))

    def dominates(self, x, f: Functional) -> bool:
        self._check(x)
        if not isinstance(f, PointEvals):
            return False
        x = as_rational(x)
        return all(p == x for p, _ in f.terms) and abs(sum(c for _, c in f.terms)) <= 1

    def seminorm_id(self, x) -> str:
        return f"q_x={as_rational(x)}"

    def parse_index(self, raw):
        return as_rational(raw)


SpaceModel = Union[FiniteDim, PointwiseSpace]


def seminorm_eval(space: SpaceModel, i, v: Vector):
    return space.seminorm(i, v)


def vec_add(u: Vector, v: Vector) -> Vector:
    return u + v


def vec_scale(alpha, v: Vector) -> Vector:
    return v.scale(alpha)


def vec_eval(v: Vector, x):
    return v(x)


def parse_vector(lit, space: SpaceModel | None = None) -> Vector:
    """Build a vector from a config literal.

    Accepted forms: ``{"hat": {"c": .5, "n": 10}}``, ``{"ind": .3}``,
    ``{"coords": [1, 2]}``, ``{"zero": true}``, ``{"scale": [a, lit]}``
    and ``{"sum": [lit, ...]}``.
    """
    if not isinstance(lit, dict) or len(lit) != 1:
        raise ValueError(f"bad vector literal {lit!r}")
    (kind, body), = lit.items()
    if kind == "hat":
        return hat(body["c"], body["n"])
    if kind == "ind":
        return indicator(body)
    if kind == "coords":
        return CoordVector(tuple(as_rational(c) for c in body))
    if kind == "zero":
        if space is None:
            raise ValueError("zero literal needs a space")
        return space.zero()
    if kind == "scale":
        alpha, inner = body
        return parse_vector(inner, space).scale(as_rational(alpha))
    if kind == "sum":
        parts = [parse_vector(b, space) for b in body]
        if not parts:
            if space is None:
                raise ValueError("empty sum needs a space")
            return space.zero()
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out
    raise ValueError(f"unknown vector literal kind {kind!r}")
