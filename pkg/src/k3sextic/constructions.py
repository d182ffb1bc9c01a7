"""Concrete lattices: hyperbolic planes, the quaternion order lattice,
Venkov lattices, ADE root lattices, and the rank-22 lattices Lambda^-(p, sigma).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import isprime, legendre_symbol

from .lattice import (IntegerLattice, direct_sum, discriminant, discriminant_group,
                      inverse, signature)


class ParameterError(ValueError):
    pass


def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ParameterError("p must be an odd prime")
    return p


def check_sigma(sigma: int) -> int:
    if not isinstance(sigma, int) or not 1 <= sigma <= 10:
        raise ParameterError("sigma must be an integer in 1..10")
    return sigma


def hyperbolic_plane(scale: int = 1) -> IntegerLattice:
    """U for scale 1, U^(p) for scale p: Gram [[0, k], [k, 0]]."""
    if scale <= 0:
        raise ParameterError("scale must be positive")
    name = "U" if scale == 1 else f"U({scale})"
    return IntegerLattice([[0, scale], [scale, 0]], ("u1", "u2"), name=name)


# -- quaternion order -------------------------------------------------------

@dataclass(frozen=True)
class QuaternionParams:
    """(q, gamma) for the maximal order of the quaternion algebra ramified at p, inf."""

    p: int
    q: int
    gamma: int
    odd_gamma: bool = False
    gamma_nonzero_mod_p: bool = False

    def problems(self) -> list[str]:
        p, q, g = self.p, self.q, self.gamma
        out = []
        if not isprime(q):
            out.append(f"q={q} is not prime")
        if q % 8 != 3:
            out.append(f"q={q} is not 3 mod 8")
        elif q == p or legendre_symbol(-q % p, p) != -1:
            out.append(f"(-{q}|{p}) != -1")
        if (g * g + p) % q:
            out.append(f"gamma^2 + p = {g * g + p} is not divisible by q={q}")
        if self.odd_gamma and g % 2 == 0:
            out.append(f"gamma={g} is not odd")
        if self.gamma_nonzero_mod_p and g % p == 0:
            out.append(f"gamma={g} is divisible by p")
        return out

    def validate(self) -> QuaternionParams:
        bad = self.problems()
        if bad:
            raise ParameterError("invalid quaternion parameters: " + "; ".join(bad))
        return self


def quaternion_params(p: int, odd_gamma: bool = False, gamma_nonzero_mod_p: bool = False,
                      q: int | None = None, gamma: int | None = None) -> QuaternionParams:
    """Smallest admissible prime q, then smallest gamma in [0, 2q) meeting the flags.

    Explicit ``q``/``gamma`` override the search and are validated.
    """
    check_odd_prime(p)
    if q is None:
        q = 3
        while not (isprime(q) and q != p and legendre_symbol(-q % p, p) == -1):
            q += 8
    if gamma is None:
        for g in range(2 * q):
            cand = QuaternionParams(p, q, g, odd_gamma, gamma_nonzero_mod_p)
            if not cand.problems():
                return cand
        raise ParameterError(f"no gamma in [0, {2 * q}) works for p={p}, q={q}")
    return QuaternionParams(p, q, gamma, odd_gamma, gamma_nonzero_mod_p).validate()


def quaternion_order_gram(params: QuaternionParams) -> IntegerLattice:
    """Reduced-trace Gram matrix of the maximal order in the basis a1..a4."""
    p, q, g = params.p, params.q, params.gamma
    entries = [
        [2, 1, 0, 0],
        [1, Fraction(q + 1, 2), 0, g],
        [0, 0, Fraction(p * (q + 1), 2), p],
        [0, g, p, Fraction(2 * (p + g * g), q)],
    ]
    if any(Fraction(x).denominator != 1 for row in entries for x in row):
        raise ParameterError(f"non-integral Gram entry for {params}")
    return IntegerLattice([[int(x) for x in row] for row in entries], ("a1", "a2", "a3", "a4"),
                          name=f"H({p};{q},{g})")


# -- Venkov lattices --------------------------------------------------------

@dataclass(frozen=True)
class VenkovSpec:
    p: int
    r: int
    s: int

    def __post_init__(self):
        if self.r < 2:
            raise ParameterError("Venkov lattices need r >= 2")
        if not 0 <= self.s <= self.r:
            raise ParameterError("need 0 <= s <= r")

    @property
    def congruent(self) -> bool:
        return (self.p * self.s + self.r - self.s) % 8 == 0

    def w_norms(self) -> list[int]:
        return [self.p if i < self.s else 1 for i in range(self.r)]


def venkov_vectors(spec: VenkovSpec) -> list[list[Fraction]]:
    """Basis v_1..v_r in w-coordinates.

    v1 = w1+w2, v2 = (w1+...+wr)/2, v_j = w_{j-1}+w_j, v_r = 2 w_r.  For r = 2
    the list degenerates, and (w1+w2)/2, 2 w2 is used instead.
    """
    r = spec.r
    half = [Fraction(1, 2)] * r

    def w(*idx, coef=1):
        v = [Fraction(0)] * r
        for i in idx:
            v[i] += coef
        return v

    if r == 2:
        return [half, w(1, coef=2)]
    vecs = [w(0, 1), half]
    vecs += [w(j - 2, j - 1) for j in range(3, r)]
    vecs.append(w(r - 1, coef=2))
    return vecs


def venkov_inner_products(spec: VenkovSpec) -> list[list[Fraction]]:
    """Inner products of the v-vectors, possibly non-integral when the
    congruence ps + (r - s) = 0 mod 8 fails."""
    norms = spec.w_norms()
    vecs = venkov_vectors(spec)
    return [[sum(n * x * y for n, x, y in zip(norms, a, b)) for b in vecs] for a in vecs]


def venkov_gram(spec: VenkovSpec) -> IntegerLattice:
    if spec.r % 2:
        raise ParameterError(f"Venkov rank must be even, got r={spec.r}")
    if not spec.congruent:
        raise ParameterError(
            f"ps + (r - s) = {spec.p * spec.s + spec.r - spec.s} is not 0 mod 8")
    g = venkov_inner_products(spec)
    lat = IntegerLattice([[int(x) for x in row] for row in g],
                         tuple(f"v{i + 1}" for i in range(spec.r)),
                         name=f"V({spec.p};{spec.r},{spec.s})")
    if abs(discriminant(lat)) != spec.p ** spec.s:
        raise AssertionError(f"v-vectors do not span {lat.name}")
    return lat


# -- root lattices ----------------------------------------------------------

def parse_ade_symbol(kind: str) -> tuple[str, int]:
    kind = kind.strip()
    letter, num = kind[:1].upper(), kind[1:]
    if letter not in "ADE" or not num.isdigit():
        raise ParameterError(f"unsupported root lattice {kind!r}")
    return letter, int(num)


def dynkin_edges(letter: str, n: int) -> list[tuple[int, int]]:
    if letter == "A" and n >= 1:
        return [(i, i + 1) for i in range(n - 1)]
    if letter == "D" and n >= 4:
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if letter == "E" and n in (6, 7, 8):
        return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    raise ParameterError(f"unsupported root lattice {letter}{n}")


def root_lattice_gram(kind: str) -> IntegerLattice:
    """Cartan matrix of A_n (n>=1), D_n (n>=4), E6, E7, E8."""
    letter, n = parse_ade_symbol(kind)
    gram = [[2 * (i == j) for j in range(n)] for i in range(n)]
    for i, j in dynkin_edges(letter, n):
        gram[i][j] = gram[j][i] = -1
    return IntegerLattice(gram, tuple(f"{letter.lower()}{n}_{i + 1}" for i in range(n)),
                          name=f"{letter}{n}")


# -- Lambda^-(p, sigma) -----------------------------------------------------

@dataclass(frozen=True)
class Summand:
    kind: str  # "U", "U(p)", "H", "V", "root"
    lattice: IntegerLattice
    venkov: VenkovSpec | None = None
    quaternion: QuaternionParams | None = None
    root_type: str = ""

    @property
    def descriptor(self) -> str:
        if self.kind == "V":
            v = self.venkov
            return f"V({v.p};{v.r},{v.s})"
        if self.kind == "H":
            qp = self.quaternion
            return f"H({qp.p};q={qp.q},gamma={qp.gamma})"
        if self.kind == "root":
            return self.root_type
        return self.lattice.name

    @property
    def definite(self) -> bool:
        return self.kind in ("V", "root")


@dataclass(frozen=True)
class LambdaDecomposition:
    p: int
    sigma: int
    line: int | None
    summands: tuple[Summand, ...]
    lattice: IntegerLattice = field(repr=False)

    @property
    def description(self) -> str:
        return " + ".join(s.descriptor for s in self.summands)

    def offset_of(self, index: int) -> int:
        return sum(s.lattice.rank for s in self.summands[:index])

    def to_json(self) -> dict:
        return {"line": self.line, "summands": [s.descriptor for s in self.summands],
                "rank": self.lattice.rank}


LINE_SHAPES = {
    1: "U(p) + H + V(16, 2 sigma - 4)",
    2: "U + H + V(16, 2 sigma - 2)",
    3: "U(p) + V(20, 2 sigma - 2)",
    4: "U + V(20, 2 sigma)",
}


def line_applies(line: int, p: int, sigma: int) -> bool:
    one = p % 4 == 1
    if line == 1:
        return (one and sigma > 1) or (not one and sigma % 2 == 0)
    if line == 2:
        return (one and sigma < 10) or (not one and sigma % 2 == 1)
    if line == 3:
        return not one and sigma % 2 == 0
    if line == 4:
        return not one and sigma % 2 == 1
    raise ParameterError(f"unknown line {line}")


def default_line(p: int, sigma: int) -> int:
    if p % 4 == 1:
        return 2 if sigma < 10 else 1
    return 3 if sigma % 2 == 0 else 4


def h_summand(params: QuaternionParams) -> Summand:
    return Summand("H", quaternion_order_gram(params), quaternion=params)


def v_summand(p: int, r: int, s: int) -> Summand:
    spec = VenkovSpec(p, r, s)
    return Summand("V", venkov_gram(spec), venkov=spec)


def root_summand(kind: str) -> Summand:
    lat = root_lattice_gram(kind)
    return Summand("root", lat, root_type=lat.name)


def assemble(p: int, sigma: int, summands: Sequence[Summand], line: int | None = None
             ) -> LambdaDecomposition:
    lat = direct_sum([s.lattice for s in summands],
                     name=f"Lambda-({p},{sigma}) = " + " + ".join(s.descriptor for s in summands))
    return LambdaDecomposition(p, sigma, line, tuple(summands), lat)


def lambda_minus(p: int, sigma: int, line: int | None = None,
                 quaternion: QuaternionParams | None = None) -> LambdaDecomposition:
    """One of the four orthogonal-sum models of Lambda^-(p, sigma)."""
    check_odd_prime(p)
    check_sigma(sigma)
    if line is None:
        line = default_line(p, sigma)
    if line not in LINE_SHAPES:
        raise ParameterError(f"line must be 1..4, got {line}")
    if not line_applies(line, p, sigma):
        raise ParameterError(f"line {line} ({LINE_SHAPES[line]}) does not apply to "
                             f"p={p}, sigma={sigma}")
    if quaternion is None and line in (1, 2):
        quaternion = quaternion_params(p)
    if line == 1:
        parts = [Summand("U(p)", hyperbolic_plane(p)), h_summand(quaternion),
                 v_summand(p, 16, 2 * sigma - 4)]
    elif line == 2:
        parts = [Summand("U", hyperbolic_plane(1)), h_summand(quaternion),
                 v_summand(p, 16, 2 * sigma - 2)]
    elif line == 3:
        parts = [Summand("U(p)", hyperbolic_plane(p)), v_summand(p, 20, 2 * sigma - 2)]
    else:
        parts = [Summand("U", hyperbolic_plane(1)), v_summand(p, 20, 2 * sigma)]
    return assemble(p, sigma, parts, line)


def verify_lambda(lat: IntegerLattice, p: int, sigma: int) -> dict[str, bool]:
    """Check evenness, signature (21, 1) and discriminant group (Z/p)^(2 sigma)."""
    report = {"rank": lat.rank == 22, "even": lat.is_even}
    report["signature"] = tuple(signature(lat)) == (21, 1)
    report["discriminant_group"] = discriminant_group(lat) == (p,) * (2 * sigma)
    return report


def p_times_inverse_integral(lat: IntegerLattice, p: int) -> bool:
    return all((p * x).denominator == 1 for row in inverse(lat.gram) for x in row)
