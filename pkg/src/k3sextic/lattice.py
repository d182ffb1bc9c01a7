"""Exact integer lattices given by Gram matrices.

Everything here works over Python ints and :class:`fractions.Fraction`;
no floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple  # tuple of int or Fraction


class LatticeError(ValueError):
    pass


class DegenerateLatticeError(LatticeError):
    """Raised when a Gram matrix turns out to be singular."""


def _as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (non-negative, each dividing the next)."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                return diag + [0] * (min(rows, cols) - t)
            _, i0, j0 = min(nz)
            a[t], a[i0] = a[i0], a[t]
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                       None)
            if bad is None:
                break
            # pivot must divide the remaining block
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form; zero rows are dropped.

    Two integer row bases span the same lattice iff their HNFs coincide.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        nz = [i for i in range(r, len(a)) if a[i][c]]
        if not nz:
            continue
        # Euclid on column c among rows r..
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            k = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[k] = a[k], a[r]
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            if all(a[i][c] == 0 for i in range(r + 1, len(a))):
                break
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return a[:r]


def integer_kernel(columns: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Basis of {u in Z^n : sum_i u_i * col[i] = 0 for every functional}.

    ``columns`` is a list of integer functionals, each of length ``n``.  The
    returned basis is saturated because it comes out of a unimodular
    transformation of the identity.
    """
    # rows of [A | I], where A[i] = (f(e_i) for f in columns)
    m = len(columns)
    work = [[columns[k][i] for k in range(m)] + [1 if j == i else 0 for j in range(n)]
            for i in range(n)]
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, n) if work[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(work[i][c]))
            work[r], work[k] = work[k], work[r]
            clean = True
            for i in range(r + 1, n):
                if work[i][c]:
                    q = work[i][c] // work[r][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                    if work[i][c]:
                        clean = False
            if clean:
                r += 1
                break
    kernel = [row[m:] for row in work[r:]]
    return hermite_normal_form(kernel) if kernel else []


def rational_rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    if not a:
        return 0
    for c in range(len(a[0])):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise DegenerateLatticeError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def congruence_diagonal(m: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal entries of a symmetric matrix after rational congruence moves.

    Uses symmetric pivoting; when every remaining diagonal entry vanishes the
    row/column ``i`` is replaced by ``i + j`` for some ``a_ij != 0``, which
    produces the non-zero pivot ``2 a_ij`` of a hyperbolic plane.  Trailing
    zeros mean the matrix is singular.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    diag: list[Fraction] = []
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0),
                        None)
            if pair is None:
                return diag + [Fraction(0)] * (n - k)
            i, j = pair
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for row in a:
                row[i] += row[j]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
        d = a[k][k]
        diag.append(d)
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
        for i in range(k + 1, n):
            a[i][k] = a[k][i] = Fraction(0)
    return diag


@dataclass(frozen=True)
class Signature:
    n_plus: int
    n_minus: int

    def __iter__(self):
        return iter((self.n_plus, self.n_minus))


@dataclass(frozen=True)
class IntegerLattice:
    """A non-degenerate lattice given by its symmetric integer Gram matrix."""

    gram: Matrix
    labels: tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gram = _as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0:
            raise LatticeError("lattice must have positive rank")
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        labels = tuple(self.labels) or tuple(f"b{i + 1}" for i in range(n))
        if len(labels) != n:
            raise LatticeError("need one label per basis vector")
        object.__setattr__(self, "labels", labels)
        if determinant(gram) == 0:
            raise DegenerateLatticeError(f"degenerate Gram matrix {gram}")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def opposite(self) -> IntegerLattice:
        neg = tuple(tuple(-x for x in row) for row in self.gram)
        return IntegerLattice(neg, self.labels, name=f"({self.name})^-" if self.name else "")

    def bilinear(self, x: Sequence, y: Sequence):
        return bilinear(self, x, y)

    def norm(self, x: Sequence):
        return bilinear(self, x, x)

    def __repr__(self) -> str:
        return f"IntegerLattice(name={self.name!r}, rank={self.rank})"


def bilinear(lat: IntegerLattice, x: Sequence, y: Sequence):
    """x^T G y, exact; the result is an int or a Fraction."""
    n = lat.rank
    if len(x) != n or len(y) != n:
        raise LatticeError(f"vectors must have length {n}")
    g = lat.gram
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = g[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
    return total


def gram_times(lat: IntegerLattice, x: Sequence) -> tuple:
    return tuple(sum(gij * xj for gij, xj in zip(row, x)) for row in lat.gram)


def is_integral_vector(x: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in x)


def direct_sum(parts: Sequence[IntegerLattice], name: str = "") -> IntegerLattice:
    if not parts:
        raise LatticeError("direct_sum of an empty list")
    n = sum(p.rank for p in parts)
    rows = [[0] * n for _ in range(n)]
    off = 0
    labels: list[str] = []
    for p in parts:
        for i in range(p.rank):
            rows[off + i][off:off + p.rank] = p.gram[i]
        labels.extend(p.labels)
        off += p.rank
    if len(set(labels)) != len(labels):
        # disambiguate repeated summand labels
        seen: dict[str, int] = {}
        uniq = []
        for lab in labels:
            seen[lab] = seen.get(lab, 0) + 1
            uniq.append(lab if seen[lab] == 1 else f"{lab}'{seen[lab] - 1}")
        labels = uniq
    return IntegerLattice(rows, tuple(labels),
                          name=name or " + ".join(p.name or "?" for p in parts))


def discriminant(lat: IntegerLattice) -> int:
    return determinant(lat.gram)


def discriminant_group(lat: IntegerLattice) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of Hom(T, Z)/T, unit factors dropped."""
    return tuple(d for d in smith_invariants(lat.gram) if d != 1)


def signature(lat_or_gram) -> Signature:
    gram = lat_or_gram.gram if isinstance(lat_or_gram, IntegerLattice) else lat_or_gram
    diag = congruence_diagonal(gram)
    if any(d == 0 for d in diag):
        raise DegenerateLatticeError("signature of a degenerate form")
    plus = sum(1 for d in diag if d > 0)
    return Signature(plus, len(diag) - plus)


def is_positive_definite(gram) -> bool:
    diag = congruence_diagonal(gram)
    return all(d > 0 for d in diag)


def sublattice(lat: IntegerLattice, basis: Sequence[Sequence[int]], labels=None,
               name: str = "") -> IntegerLattice:
    """Lattice spanned by integer ``basis`` rows, with the induced Gram matrix."""
    gb = [gram_times(lat, b) for b in basis]
    gram = [[sum(x * y for x, y in zip(bi, gbj)) for gbj in gb] for bi in basis]
    return IntegerLattice(gram, tuple(labels) if labels else (), name=name)


def orthogonal_complement(lat: IntegerLattice, h: Sequence[int]):
    """Saturated complement h^perp as (sublattice, basis rows in lat coordinates).

    Raises :class:`DegenerateLatticeError` when the induced form is singular
    (e.g. for isotropic ``h``).
    """
    if not any(h):
        raise LatticeError("h must be non-zero")
    if not is_integral_vector(h):
        raise LatticeError("h must be a lattice vector")
    h = [int(x) for x in h]
    functional = list(gram_times(lat, h))
    basis = integer_kernel([functional], lat.rank)
    sub = sublattice(lat, basis, name=f"{lat.name} perp")
    return sub, basis


def same_span(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hermite_normal_form(a) == hermite_normal_form(b)


# plain-text Gram format ---------------------------------------------------

def format_gram(lat: IntegerLattice) -> str:
    lines = [str(lat.rank)]
    lines += [" ".join(str(x) for x in row) for row in lat.gram]
    lines.append(" ".join(lat.labels))
    return "\n".join(lines) + "\n"


def parse_gram(text: str, name: str = "") -> IntegerLattice:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise LatticeError("empty Gram file")
    try:
        n = int(lines[0][0])
    except ValueError as exc:
        raise LatticeError(f"bad rank line {lines[0]!r}") from exc
    if len(lines) < n + 1:
        raise LatticeError(f"expected {n} matrix rows")
    try:
        rows = [[int(x) for x in ln] for ln in lines[1:n + 1]]
    except ValueError as exc:
        raise LatticeError("Gram entries must be integers") from exc
    if any(len(r) != n for r in rows):
        raise LatticeError(f"every row must have {n} entries")
    labels: tuple[str, ...] = ()
    if len(lines) > n + 1:
        labels = tuple(lines[n + 1])
    return IntegerLattice(rows, labels, name=name)


def read_gram(path) -> IntegerLattice:
    with open(path, encoding="utf-8") as fh:
        return parse_gram(fh.read(), name=str(path))


def write_gram(lat: IntegerLattice, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_gram(lat))


def lll_reduce(basis: Sequence[Sequence[int]], gram: Sequence[Sequence[int]],
               delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce integer rows ``basis`` for the positive-definite form ``gram``.

    Exact rational arithmetic throughout (incremental Gram-Schmidt).  Only
    the span matters to callers, so the result is another basis of it.
    """
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return b

    def ip(u, v):
        return sum(ui * sum(g * vj for g, vj in zip(row, v)) for ui, row in zip(u, gram) if ui)

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    bstar[0] = Fraction(ip(b[0], b[0]))
    k, kmax = 1, 0

    def red(k, l):
        if abs(mu[k][l]) > Fraction(1, 2):
            q = round(mu[k][l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            mu[k][l] -= q
            for i in range(l):
                mu[k][i] -= q * mu[l][i]

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (ip(b[k], b[j]) - sum(mu[j][i] * mu[k][i] * bstar[i]
                                                 for i in range(j))) / bstar[j]
            bstar[k] = ip(b[k], b[k]) - sum(mu[k][j] ** 2 * bstar[j] for j in range(k))
            if bstar[k] <= 0:
                raise LatticeError("LLL needs independent vectors and a definite form")
        red(k, k - 1)
        if bstar[k] < (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            b[k], b[k - 1] = b[k - 1], b[k]
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            m = mu[k][k - 1]
            big = bstar[k] + m * m * bstar[k - 1]
            mu[k][k - 1] = m * bstar[k - 1] / big
            bstar[k] = bstar[k - 1] * bstar[k] / big
            bstar[k - 1] = big
            for i in range(k + 1, kmax + 1):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b
