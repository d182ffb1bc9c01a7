"""Degree-2 vectors h with no exceptional classes, case by case.

For each (p, sigma) a lattice M of signature (r-1, 1) is split off
Lambda^-(p, sigma) = M + V with V positive definite, and a vector h0 in M
with h0^2 = -2 is given together with a basis e_1..e_{r-1} of h0^perp.
Vectors x in M with x.h0 = -1 are exactly v0 + sum x_i e_i with v0 = h0/2
and half-integral x_i obeying per-coordinate coset conditions.  The set of
such x with x^2 <= 0 is shown to be empty by exhaustive enumeration, and the
roots of h0^perp are collected to give the ADE type R.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .constructions import (LambdaDecomposition, ParameterError, QuaternionParams, Summand,
                            assemble, check_odd_prime, check_sigma, h_summand, hyperbolic_plane,
                            lambda_minus, quaternion_params, root_summand, verify_lambda)
from .lattice import (IntegerLattice, determinant, direct_sum, gram_times,
                      integer_kernel, lll_reduce, orthogonal_complement,
                      same_span, sublattice)
from .quadbody import HALF, CosetConstraint, QuadraticForm, search
from .roots import (ADEType, RootInventory, ade_type, enumerate_roots, root_components,
                    sigma_of_definite_part)

CASES = ("I", "II", "III", "IV")
# which model of Lambda^- each case splits as M + V
CASE_LINE = {"I": 2, "II": 1, "III": 1, "IV": 4}


class TheoremViolation(AssertionError):
    """An exceptional vector was found where none may exist."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def select_cases(p: int, sigma: int) -> list[str]:
    check_odd_prime(p)
    check_sigma(sigma)
    if p % 4 == 1:
        return [c for c, ok in (("I", sigma < 10), ("II", sigma > 1)) if ok]
    return ["III"] if sigma % 2 == 0 else ["IV"]


def default_case(p: int, sigma: int) -> str:
    return select_cases(p, sigma)[0]


@dataclass
class CaseData:
    case: str
    p: int
    sigma: int
    decomposition: LambdaDecomposition = field(repr=False)
    m_summands: int  # leading summands of the decomposition forming M
    M: IntegerLattice = field(repr=False)
    params: dict
    h0: tuple[int, ...]
    e_basis: list[tuple[int, ...]]
    quaternion: QuaternionParams | None = None

    @property
    def rank(self) -> int:
        return self.M.rank

    @property
    def v0(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.h0)

    @cached_property
    def Q(self) -> QuadraticForm:
        return QuadraticForm.from_gram(self.M.gram, offset=self.v0, basis=self.e_basis)

    @cached_property
    def G(self) -> QuadraticForm:
        return QuadraticForm.from_gram(self.M.gram, basis=self.e_basis, const=-2)

    @property
    def definite_summands(self) -> tuple[Summand, ...]:
        return self.decomposition.summands[self.m_summands:]

    def embed(self, x: Sequence) -> tuple:
        """Coordinates of a vector of M inside the full rank-22 lattice."""
        return tuple(x) + (0,) * (self.decomposition.lattice.rank - self.rank)

    def check(self) -> None:
        M, h0 = self.M, self.h0
        if M.norm(h0) != -2:
            raise ParameterError(f"h0^2 = {M.norm(h0)}, expected -2")
        bad = [i + 1 for i, e in enumerate(self.e_basis) if M.bilinear(e, h0) != 0]
        if bad:
            raise ParameterError(f"e_{bad} not orthogonal to h0")
        _, comp = orthogonal_complement(M, h0)
        if not same_span(self.e_basis, comp):
            raise ParameterError("e-basis does not span the saturated complement of h0")
        if M.bilinear(self.v0, h0) != -1:
            raise ParameterError("v0.h0 != -1")
        # [M : Z h0 + h0^perp] = 2, so every x with x.h0 = -1 is v0 + (1/2)Z-combination
        big = determinant(sublattice(M, [h0] + list(self.e_basis)).gram)
        if big != 4 * determinant(M.gram):
            raise ParameterError("Z h0 + h0^perp does not have index 2 in M")


def _alpha_for(p: int, alpha: int | None) -> int:
    if alpha is None:
        alpha = next(a for a in range(p) if (a * a + 1) % p == 0)
        if alpha % 2:
            alpha += p
    if alpha % 2 or (alpha * alpha + 1) % p:
        raise ParameterError(f"alpha={alpha} must be even with alpha^2 = -1 mod {p}")
    return alpha


def _case3_xy(p: int, q: int, x: int | None, y: int | None) -> tuple[int, int]:
    def ok(x, y):
        return (x % 2 == 0 and y % 2 == 0 and y % p != 0
                and (x * x + x * y + (q + 1) // 4 * y * y + 1) % p == 0)

    if x is None or y is None:
        for xx in range(0, 2 * p, 2):
            for yy in range(0, 2 * p, 2):
                if ok(xx, yy):
                    return xx, yy
        raise ParameterError(f"no even (x, y) found for p={p}, q={q}")
    if not ok(x, y):
        raise ParameterError(f"(x, y)=({x}, {y}) must be even, y != 0 mod p, "
                             "x^2 + xy + (q+1)/4 y^2 = -1 mod p")
    return x, y


def build_case(p: int, sigma: int, case: str | None = None, *, q: int | None = None,
               gamma: int | None = None, alpha: int | None = None, x: int | None = None,
               y: int | None = None, definite: Sequence[Summand] | None = None) -> CaseData:
    """Assemble M, h0 and the e-basis for one case.

    ``definite`` replaces the Venkov summand of M + V with other positive
    definite summands (e.g. E8 + E8); the result must still model
    Lambda^-(p, sigma).
    """
    applicable = select_cases(p, sigma)
    case = case or applicable[0]
    if case not in CASES:
        raise ParameterError(f"unknown case {case!r}")
    if case not in applicable:
        raise ParameterError(f"case {case} does not apply to p={p}, sigma={sigma}")
    params: dict = {}
    qp = None
    if case == "IV":
        if q is not None or gamma is not None:
            raise ParameterError("case IV takes no quaternion parameters")
        decomp = lambda_minus(p, sigma, line=4)
        m_summands = 2
        h0 = (2, -(p + 1) // 2, 1) + (0,) * 19
        e = []
        for i in range(1, 18):
            v = [0] * 22
            v[22 - i] = 1
            e.append(v)
        e.append([1, (p + 1) // 4] + [0] * 20)
        e.append([0, -p, 1] + [0] * 19)
        e.append([0, 0, 0, 1, -1] + [0] * 17)
        e.append([0, p, 0, 0, -2] + [0] * 17)
    else:
        qp = quaternion_params(p, odd_gamma=case == "I", gamma_nonzero_mod_p=case == "III",
                               q=q, gamma=gamma)
        qq, g = qp.q, qp.gamma
        params.update(q=qq, gamma=g)
        u = hyperbolic_plane(1 if case == "I" else p)
        ukind = "U" if case == "I" else "U(p)"
        if definite is None:
            decomp = lambda_minus(p, sigma, line=CASE_LINE[case], quaternion=qp)
        else:
            decomp = assemble(p, sigma, [Summand(ukind, u), h_summand(qp)] + list(definite))
        m_summands = 2
        if case == "I":
            if (p + g * g) % 4 != 2:
                raise ParameterError("p + gamma^2 must be 2 mod 4")
            t = -((p + g * g) // qq + 2) // 4
            params["t"] = t
            nu = (p + g * g) // qq
            h0 = (2, 2 * t, 1, 0, 0, 1)
            e = [[1, 0, -t, 0, 0, 0],
                 [0, 1, -1, 0, 0, 0],
                 [0, 0, -(g + 1) // 2, 1, 0, 0],
                 [0, 0, -nu, 0, 0, 1],
                 [0, 0, -p, 0, 2, 0]]
        elif case == "II":
            a = _alpha_for(p, alpha)
            b = -(a * a + 1) // p
            params.update(alpha=a, b=b)
            h0 = (1, b, a, 0, 0, 0)
            e = [[0, 0, 0, 0, 0, 1],
                 [0, 0, 0, 0, 1, 0],
                 [1, -b, 0, 0, 0, 0],
                 [0, 0, 1, -2, 0, 0],
                 [0, -a, 0, p, 0, 0]]
        else:
            xx, yy = _case3_xy(p, qq, x, y)
            norm = xx * xx + xx * yy + (qq + 1) // 4 * yy * yy
            b = -(norm + 1) // p
            if b % 2 == 0:
                raise ParameterError(f"b={b} must be odd")
            inv = pow(g * yy, -1, p)
            e36 = (-(2 * xx + yy) * inv) % p
            e46 = (-(xx + (1 + qq) // 2 * yy) * inv) % p
            e32, r32 = divmod(-(g * yy * e36 + 2 * xx + yy), p)
            e42, r42 = divmod(-(g * yy * e46 + xx + (1 + qq) // 2 * yy), p)
            assert r32 == 0 and r42 == 0
            params.update(x=xx, y=yy, b=b, E32=e32, E36=e36, E42=e42, E46=e46)
            h0 = (1, b, xx, yy, 0, 0)
            e = [[0, 0, 0, 0, 1, 0],
                 [1, -b, 0, 0, 0, 0],
                 [0, e32, 1, 0, 0, e36],
                 [0, e42, 0, 1, 0, e46],
                 [0, -g * yy, 0, 0, 0, p]]
    if case == "IV":
        M = decomp.lattice
    else:
        M = direct_sum([s.lattice for s in decomp.summands[:m_summands]], name=f"M({case})")
    report = verify_lambda(decomp.lattice, p, sigma)
    if not all(report.values()):
        raise ParameterError(f"{decomp.description} fails the Lambda conditions: {report}")
    cd = CaseData(case, p, sigma, decomp, m_summands if case != "IV" else len(decomp.summands),
                  M, params, tuple(h0), [tuple(v) for v in e], qp)
    cd.check()
    return cd


def _solve_mod2(columns: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int] | None:
    """Unique solution y of sum_i y_i columns[i] = rhs over F_2, else None."""
    n = len(columns)
    rows = [[columns[i][k] % 2 for i in range(n)] + [rhs[k] % 2] for k in range(len(rhs))]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            return None  # free variable: parity of x_c is not determined
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[n] for row in rows[r:]):
        raise ParameterError("no lattice vector v with v.h0 = -1 on this slice")
    return [rows[i][n] for i in range(n)]


def z_condition(cd: CaseData) -> CosetConstraint:
    """Cosets for x_i such that v0 + sum x_i e_i lies in M.

    Writing x = y/2 the condition is sum y_i e_i = h0 (mod 2) coordinatewise;
    for a saturated e-basis it pins the parity of every y_i.
    """
    sol = _solve_mod2(cd.e_basis, cd.h0)
    if sol is None:
        raise ParameterError("Z-condition does not decouple into per-variable cosets")
    return CosetConstraint(tuple(HALF if bit else Fraction(0) for bit in sol))


@dataclass
class EmptinessRecord:
    nodes: int
    found: list  # witnesses (coordinates in the ambient lattice)

    @property
    def empty(self) -> bool:
        return not self.found

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "found": len(self.found)}


def verify_exceptional_empty(cd: CaseData) -> EmptinessRecord:
    """Enumerate x with x.h0 = -1 and x^2 <= 0 in M; raise if any exists."""
    res = search(cd.Q, z_condition(cd))
    if res.points:
        xs = res.points[0]
        witness = tuple(int(v0 + sum(xi * e[k] for xi, e in zip(xs, cd.e_basis)))
                        for k, v0 in enumerate(cd.v0))
        raise TheoremViolation(f"exceptional vector {list(witness)} for p={cd.p}, "
                               f"sigma={cd.sigma}", witness)
    return EmptinessRecord(res.nodes, [])


def _bezout_vector(coeffs: Sequence[int], target: int) -> list[int]:
    """Integer u with sum u_i c_i = target; requires gcd(c) | target."""
    g, u = 0, [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if g == 0:
            g, u = abs(c), [0] * len(coeffs)
            u[i] = 1 if c > 0 else -1
            continue
        # extended gcd of (g, c)
        old_r, r, old_s, s, old_t, t = g, c, 1, 0, 0, 1
        while r:
            qt = old_r // r
            old_r, r = r, old_r - qt * r
            old_s, s = s, old_s - qt * s
            old_t, t = t, old_t - qt * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        u = [old_s * x for x in u]
        u[i] += old_t
        g = old_r
    if g == 0 or target % g:
        raise ParameterError(f"h.Lambda = {g}Z does not contain {target}")
    return [x * (target // g) for x in u]


def verify_full_lattice(lat: IntegerLattice, h: Sequence[int], reduce: bool = True
                        ) -> EmptinessRecord:
    """Directly list u in ``lat`` with u.h = -1 and u^2 <= 0.

    Solves u.h = -1 for a particular u, then enumerates u + w over the
    positive-definite complement h^perp.  Witnesses with u^2 = 0 come first.
    """
    if lat.norm(h) != -2:
        raise ParameterError("h must have h^2 = -2")
    functional = list(gram_times(lat, h))
    base = _bezout_vector(functional, -1)
    basis = integer_kernel([functional], lat.rank)
    if reduce:
        basis = lll_reduce(basis, lat.gram)
    form = QuadraticForm.from_gram(lat.gram, offset=base, basis=basis)
    res = search(form)
    found = []
    for w in res.points:
        u = tuple(b + sum(int(wi) * v[k] for wi, v in zip(w, basis)) for k, b in enumerate(base))
        found.append(u)
    found.sort(key=lambda u: (lat.norm(u) != 0, u))
    return EmptinessRecord(res.nodes, found)


def _inventory_from_points(gram, points) -> RootInventory:
    roots = [tuple(int(v) for v in pt) for pt in points]
    comps, ranks = root_components(gram, roots)
    return RootInventory(roots, comps, ranks)


def sigma_h0_perp(cd: CaseData, cross_check: bool = True) -> tuple[ADEType, RootInventory]:
    """Roots of h0^perp from G = 0 in the e-basis; optionally confirmed on an
    independently computed complement basis."""
    e_lat = sublattice(cd.M, cd.e_basis)
    res = search(cd.G, target=0)
    inv = _inventory_from_points(e_lat.gram, res.points)
    inv.nodes = res.nodes
    kind = ade_type(inv)
    if cross_check:
        comp, basis = orthogonal_complement(cd.M, cd.h0)
        reduced = lll_reduce(basis, cd.M.gram)
        other = enumerate_roots(sublattice(cd.M, reduced))
        if other.count != inv.count or ade_type(other) != kind:
            raise AssertionError(f"root paths disagree: {kind} ({inv.count}) vs "
                                 f"{ade_type(other)} ({other.count})")
    return kind, inv


def roots_in_M(cd: CaseData, inv: RootInventory) -> set[tuple[int, ...]]:
    return {tuple(sum(c * e[k] for c, e in zip(r, cd.e_basis)) for k in range(cd.rank))
            for r in inv.roots}


@dataclass
class Certificate:
    p: int
    sigma: int
    case: str
    decomposition: LambdaDecomposition = field(repr=False)
    params: dict
    h0: tuple[int, ...]
    h: tuple[int, ...]
    e_basis: list[tuple[int, ...]]
    z_condition: CosetConstraint
    empties: EmptinessRecord
    roots: RootInventory = field(repr=False)
    sigma_h0_perp: ADEType
    sigma_definite: ADEType
    full_check: EmptinessRecord | None = None

    @property
    def R(self) -> ADEType:
        return self.sigma_h0_perp + self.sigma_definite

    @property
    def milnor(self) -> int:
        return self.R.milnor_number

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "sigma": self.sigma,
            "case": self.case,
            "lambda": self.decomposition.to_json(),
            "params": dict(self.params),
            "h0": list(self.h0),
            "h": list(self.h),
            "e_basis": [list(e) for e in self.e_basis],
            "z_condition": [str(c) for c in self.z_condition.reps],
            "empties": self.empties.to_json(),
            "roots": self.roots.to_json(),
            "sigma_h0_perp": str(self.sigma_h0_perp),
            "sigma_definite": str(self.sigma_definite),
            "R": str(self.R),
            "milnor": self.milnor,
        }
        if self.full_check is not None:
            out["full_lattice_check"] = self.full_check.to_json()
        return out


OVERRIDE_KEYS = ("q", "gamma", "alpha", "x", "y")


def main_theorem_verify(p: int, sigma: int, case: str | None = None, *, cross_check: bool = False,
                        full_check: bool = False, definite: Sequence[Summand] | None = None,
                        **overrides) -> Certificate:
    """Build h for (p, sigma), prove it has no exceptional classes, compute R."""
    unknown = set(overrides) - set(OVERRIDE_KEYS)
    if unknown:
        raise TypeError(f"unknown overrides {sorted(unknown)}")
    cd = build_case(p, sigma, case, definite=definite, **overrides)
    zc = z_condition(cd)
    empties = verify_exceptional_empty(cd)
    kind, inv = sigma_h0_perp(cd, cross_check=cross_check)
    if cd.case == "I":
        g, qq = cd.params["gamma"], cd.params["q"]
        known = {(0, 1, -1, 0, 0, 0), (2, -(p + g * g) // (2 * qq), 1, 0, 0, 1)}
        missing = known - roots_in_M(cd, inv)
        if missing:
            raise AssertionError(f"expected roots {sorted(missing)} not found in h0^perp")
    definite_type = sigma_of_definite_part(cd.decomposition, summands=cd.definite_summands,
                                           cross_check=cross_check)
    h = cd.embed(cd.h0)
    full = None
    if full_check:
        full = verify_full_lattice(cd.decomposition.lattice, h)
        if full.found:
            raise TheoremViolation("full-lattice enumeration found an exceptional vector",
                                   full.found[0])
    return Certificate(p, sigma, cd.case, cd.decomposition, cd.params, cd.h0, h, cd.e_basis, zc,
                       empties, inv, kind, definite_type, full)


def recheck_certificate(data: dict) -> dict:
    """Re-run the verification described by a certificate's JSON and return
    the fresh JSON (equal to ``data`` when the certificate is sound)."""
    overrides = {k: data["params"][k] for k in ("q", "gamma", "alpha", "x", "y")
                 if k in data["params"]}
    definite = None
    tail = data["lambda"]["summands"][2:]
    if tail and not any(name.startswith("V(") for name in tail):
        definite = [root_summand(name) for name in tail]
    cert = main_theorem_verify(data["p"], data["sigma"], data["case"], definite=definite,
                               full_check="full_lattice_check" in data, **overrides)
    return cert.to_json()
