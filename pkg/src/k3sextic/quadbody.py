"""Quadratic bodies and exact enumeration of coset points inside them.

A :class:`QuadraticForm` is ``Q(x) = x^T A x + b.x + c`` with rational
coefficients and positive-definite ``A``.  The body ``B_Q = {Q <= 0}`` is
compact, and its projection to a coordinate subspace is again a quadratic
body, obtained by minimizing ``Q`` over the dropped coordinates.

Enumeration walks the coordinates in order.  For the prefix ``x_1..x_k`` the
admissible values of ``x_{k+1}`` are the coset points in the one-variable
image of the projected form, so every node of the search tree is a prefix
that still extends to a real point of the body.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .lattice import congruence_diagonal

HALF = Fraction(1, 2)


class QuadraticFormError(ValueError):
    pass


def _frac_matrix(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _solve(a: Sequence[Sequence[Fraction]], rhs: Sequence[Sequence[Fraction]]):
    """Solve a X = rhs exactly (a square, non-singular); returns X as rows."""
    n = len(a)
    m = len(rhs[0]) if rhs else 0
    w = [list(a[i]) + list(rhs[i]) for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if w[i][c] != 0), None)
        if piv is None:
            raise QuadraticFormError("stationarity system is singular")
        w[c], w[piv] = w[piv], w[c]
        inv = 1 / w[c][c]
        w[c] = [x * inv for x in w[c]]
        for i in range(n):
            if i != c and w[i][c]:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[c])]
    return [row[n:n + m] for row in w]


@dataclass(frozen=True)
class QuadraticForm:
    """Inhomogeneous quadratic form with positive-definite quadratic part."""

    quad: tuple[tuple[Fraction, ...], ...]
    lin: tuple[Fraction, ...] = ()
    const: Fraction = Fraction(0)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        quad = _frac_matrix(self.quad)
        n = len(quad)
        if n == 0:
            raise QuadraticFormError("a quadratic form needs at least one variable")
        if any(len(r) != n for r in quad) or any(quad[i][j] != quad[j][i]
                                                  for i in range(n) for j in range(i)):
            raise QuadraticFormError("quadratic part must be a symmetric square matrix")
        lin = tuple(Fraction(x) for x in self.lin) or (Fraction(0),) * n
        if len(lin) != n:
            raise QuadraticFormError("linear part has the wrong length")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "const", Fraction(self.const))
        if self.check and not all(d > 0 for d in congruence_diagonal(quad)):
            raise QuadraticFormError("quadratic part is not positive definite")

    @property
    def n(self) -> int:
        return len(self.quad)

    def __call__(self, x: Sequence) -> Fraction:
        a, b = self.quad, self.lin
        total = self.const
        for i, xi in enumerate(x):
            if xi:
                total += xi * (b[i] + sum(a[i][j] * xj for j, xj in enumerate(x) if xj))
        return total

    @classmethod
    def from_gram(cls, gram, offset: Sequence = (), basis: Sequence[Sequence] | None = None,
                  const=0) -> QuadraticForm:
        """The form ``x -> (offset + sum x_i basis_i)^2 + const``.

        ``gram`` is the ambient Gram matrix; ``basis`` defaults to the standard
        basis and ``offset`` to zero.
        """
        n_amb = len(gram)
        if basis is None:
            basis = [[int(i == j) for j in range(n_amb)] for i in range(n_amb)]
        off = list(offset) if offset else [0] * n_amb
        # sparse rows keep the products in machine integers where possible
        rows = [[(j, g) for j, g in enumerate(row) if g] for row in gram]

        def times_gram(v):
            return [sum(g * v[j] for j, g in row) for row in rows]

        def dot(u, v):
            return sum(a * b for a, b in zip(u, v) if a)

        gb = [times_gram(b) for b in basis]
        quad = [[dot(bi, gbj) for gbj in gb] for bi in basis]
        lin = [2 * dot(off, gbj) for gbj in gb]
        c = dot(off, times_gram(off)) + const
        return cls(quad, lin, c)

    # -- structure --------------------------------------------------------

    @cached_property
    def _prefix_decomposition(self):
        """Write Q as ``sum_k d_k (x_k + sum_{j<k} m_kj x_j + beta_k)^2 + gamma``.

        Completing the square from the last variable backwards; truncating
        the sum at ``k`` gives the projection to the first ``k`` variables.
        """
        n = self.n
        a = [list(r) for r in self.quad]
        b = list(self.lin)
        c = self.const
        d = [Fraction(0)] * n
        mult = [None] * n
        beta = [Fraction(0)] * n
        for k in range(n - 1, -1, -1):
            dk = a[k][k]
            if dk <= 0:
                raise QuadraticFormError("quadratic part is not positive definite")
            d[k] = dk
            mult[k] = tuple(a[k][j] / dk for j in range(k))
            beta[k] = b[k] / (2 * dk)
            # subtract d_k (x_k + l)^2 restricted to the earlier variables
            for i in range(k):
                aik = a[i][k]
                if aik:
                    for j in range(k):
                        a[i][j] -= aik * a[k][j] / dk
                    b[i] -= aik * b[k] / dk
            c -= b[k] * b[k] / (4 * dk)
        return tuple(d), tuple(mult), tuple(beta), c

    @property
    def minimum(self) -> Fraction:
        return self._prefix_decomposition[3]

    def substitute(self, pinned: Mapping[int, Fraction]) -> tuple[QuadraticForm, list[int]]:
        """Fix the variables in ``pinned``; returns the new form and the kept indices."""
        keep = [i for i in range(self.n) if i not in pinned]
        if not keep:
            raise QuadraticFormError("cannot pin every variable")
        a, b = self.quad, self.lin
        vals = {i: Fraction(v) for i, v in pinned.items()}
        quad = [[a[i][j] for j in keep] for i in keep]
        lin = [b[i] + 2 * sum(a[i][j] * v for j, v in vals.items()) for i in keep]
        c = self.const + sum(b[i] * v for i, v in vals.items())
        c += sum(a[i][j] * vi * vj for i, vi in vals.items() for j, vj in vals.items())
        return QuadraticForm(quad, lin, c, check=False), keep

    def permute(self, order: Sequence[int]) -> QuadraticForm:
        """Reorder variables: new variable k is old variable ``order[k]``."""
        if sorted(order) != list(range(self.n)):
            raise QuadraticFormError("order must be a permutation of the variables")
        quad = [[self.quad[i][j] for j in order] for i in order]
        return QuadraticForm(quad, [self.lin[i] for i in order], self.const, check=False)


def project(q: QuadraticForm, keep: Iterable[int]) -> QuadraticForm:
    """Projection of the body of ``q`` to the coordinates ``keep``.

    Solves the stationarity equations dQ/dX_i = 0 for the dropped variables
    and substitutes the affine solutions back.  The result is expressed in
    the kept variables in increasing index order.
    """
    s = sorted(set(keep))
    if not s:
        raise QuadraticFormError("projection needs a non-empty variable set")
    if s[0] < 0 or s[-1] >= q.n:
        raise QuadraticFormError("variable index out of range")
    t = [i for i in range(q.n) if i not in s]
    a, b = q.quad, q.lin
    if not t:
        return q
    a_tt = [[a[i][j] for j in t] for i in t]
    # columns: A_TS (one per kept variable) and b_T / 2
    rhs = [[a[i][j] for j in s] + [b[i] / 2] for i in t]
    sol = _solve(a_tt, rhs)  # x_T = -(sol[:, :-1] x_S + sol[:, -1])
    quad = [[a[i][j] - sum(a[i][tk] * sol[k][sj] for k, tk in enumerate(t))
             for sj, j in enumerate(s)] for i in s]
    lin = [b[i] - 2 * sum(a[i][tk] * sol[k][-1] for k, tk in enumerate(t)) for i in s]
    c = q.const - sum(b[tk] * sol[k][-1] for k, tk in enumerate(t)) / 2
    return QuadraticForm(quad, lin, c, check=False)


def stationary_point(q: QuadraticForm, keep: Sequence[int], x_keep: Sequence) -> dict[int, Fraction]:
    """Minimizer over the dropped coordinates for fixed kept coordinates."""
    s = sorted(keep)
    t = [i for i in range(q.n) if i not in s]
    if not t:
        return {}
    a, b = q.quad, q.lin
    xs = dict(zip(s, (Fraction(v) for v in x_keep)))
    a_tt = [[a[i][j] for j in t] for i in t]
    rhs = [[-(b[i] / 2 + sum(a[i][j] * xs[j] for j in s))] for i in t]
    sol = _solve(a_tt, rhs)
    return {ti: sol[k][0] for k, ti in enumerate(t)}


@dataclass(frozen=True)
class OneVarImage:
    """The interval ``{t : a t^2 + b t + c <= 0}`` with ``a > 0``, kept exact."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a <= 0:
            raise QuadraticFormError("leading coefficient must be positive")

    @property
    def center(self) -> Fraction:
        return -self.b / (2 * self.a)

    @property
    def half_width_sq(self) -> Fraction:
        """Square of the half-width; negative means the interval is empty."""
        return (self.b * self.b - 4 * self.a * self.c) / (4 * self.a * self.a)

    @property
    def discriminant(self) -> Fraction:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_empty(self) -> bool:
        return self.discriminant < 0

    def contains(self, t) -> bool:
        t = Fraction(t)
        return self.a * t * t + self.b * t + self.c <= 0

    def value(self, t) -> Fraction:
        t = Fraction(t)
        return self.a * t * t + self.b * t + self.c

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        return f"[{self.center} - sqrt({self.half_width_sq}), {self.center} + sqrt({self.half_width_sq})]"


def jpi(q: QuadraticForm, nu: int, pinned: Mapping[int, Fraction] | None = None) -> OneVarImage:
    """Image of the body of ``q`` (with ``pinned`` substituted) on the axis ``nu``."""
    pinned = dict(pinned or {})
    if nu in pinned:
        raise QuadraticFormError(f"variable {nu} is pinned")
    if pinned:
        q, keep = q.substitute(pinned)
        nu = keep.index(nu)
    one = project(q, [nu])
    return OneVarImage(one.quad[0][0], one.lin[0], one.const)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def interval_points(img: OneVarImage, coset=0) -> list[Fraction]:
    """All ``t`` in ``coset + Z`` with ``a t^2 + b t + c <= 0``, ascending."""
    coset = Fraction(coset)
    r2 = img.half_width_sq
    if r2 < 0:
        return []
    # integer upper bound on sqrt(r2): sqrt(num*den)/den <= (isqrt(num*den)+1)/den
    bound = Fraction(math.isqrt(r2.numerator * r2.denominator) + 1, r2.denominator)
    m = img.center
    lo = _ceil_frac(m - bound - coset)
    hi = _floor_frac(m + bound - coset)
    return [coset + k for k in range(lo, hi + 1) if img.contains(coset + k)]


@dataclass(frozen=True)
class CosetConstraint:
    """Per-variable cosets: coordinate ``i`` must lie in ``reps[i] + Z``."""

    reps: tuple[Fraction, ...]

    def __post_init__(self):
        reps = tuple(Fraction(r) for r in self.reps)
        if any(r not in (0, HALF) for r in reps):
            raise QuadraticFormError("coset representatives must be 0 or 1/2")
        object.__setattr__(self, "reps", reps)

    @classmethod
    def integers(cls, n: int) -> CosetConstraint:
        return cls((Fraction(0),) * n)

    @classmethod
    def parse(cls, text: str) -> CosetConstraint:
        return cls(tuple(Fraction(tok.strip()) for tok in text.split(",") if tok.strip()))

    def __len__(self) -> int:
        return len(self.reps)

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.reps)

    def admits(self, x: Sequence) -> bool:
        return all((Fraction(v) - r).denominator == 1 for v, r in zip(x, self.reps))


@dataclass
class EnumerationResult:
    points: list[tuple[Fraction, ...]]
    nodes: int


def search(q: QuadraticForm, cosets: CosetConstraint | None = None, target=None,
           order: Sequence[int] | None = None) -> EnumerationResult:
    """Depth-first enumeration of coset points in the body of ``q``.

    With ``target`` set, only points with ``Q(x) == target`` are kept (the
    body ``Q <= target`` is enumerated and filtered).  ``order`` permutes the
    elimination order; points are always returned in the original
    coordinates, sorted lexicographically.
    """
    n = q.n
    cosets = cosets or CosetConstraint.integers(n)
    if len(cosets) != n:
        raise QuadraticFormError("coset constraint has the wrong length")
    work = q
    reps = cosets.reps
    if target is not None:
        target = Fraction(target)
        work = QuadraticForm(q.quad, q.lin, q.const - target, check=False)
    if order is not None:
        work = work.permute(order)
        reps = tuple(reps[i] for i in order)
    d, mult, beta, gamma = work._prefix_decomposition

    found: list[tuple[Fraction, ...]] = []
    nodes = 0
    prefix: list[Fraction] = []

    def descend(k: int, value: Fraction):
        nonlocal nodes
        nodes += 1
        if k == n:
            found.append(tuple(prefix))
            return
        shift = beta[k] + sum(m * x for m, x in zip(mult[k], prefix) if x)
        dk = d[k]
        img = OneVarImage(dk, 2 * dk * shift, dk * shift * shift + value)
        for t in interval_points(img, reps[k]):
            prefix.append(t)
            descend(k + 1, value + dk * (t + shift) ** 2)
            prefix.pop()

    if gamma <= 0:
        descend(0, gamma)
    points = found
    if target is not None:
        points = [x for x in points if work(x) == 0]
    if order is not None:
        inv = [0] * n
        for k, i in enumerate(order):
            inv[i] = k
        points = [tuple(x[inv[i]] for i in range(n)) for x in points]
    points.sort()
    return EnumerationResult(points, nodes)


def enumerate_points(q: QuadraticForm, cosets: CosetConstraint | None = None, target=None,
                     order: Sequence[int] | None = None) -> list[tuple[Fraction, ...]]:
    """Coset points with ``Q(x) <= 0`` (or ``Q(x) == target``), lexicographic."""
    return search(q, cosets, target, order).points


# text format --------------------------------------------------------------

def parse_form(text: str) -> QuadraticForm:
    """Read ``n``, the n x n matrix, the linear vector and the constant."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        n = int(lines[0][0])
        quad = [[Fraction(x) for x in ln] for ln in lines[1:n + 1]]
        lin = [Fraction(x) for x in lines[n + 1]]
        const = Fraction(lines[n + 2][0])
    except (IndexError, ValueError, ZeroDivisionError) as exc:
        raise QuadraticFormError(f"malformed form file: {exc}") from exc
    if len(quad) != n or any(len(r) != n for r in quad):
        raise QuadraticFormError("matrix block must be n x n")
    return QuadraticForm(quad, lin, const)


def format_form(q: QuadraticForm) -> str:
    lines = [str(q.n)]
    lines += [" ".join(str(x) for x in row) for row in q.quad]
    lines.append(" ".join(str(x) for x in q.lin))
    lines.append(str(q.const))
    return "\n".join(lines) + "\n"
