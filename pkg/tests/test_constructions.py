from __future__ import annotations

from fractions import Fraction

import pytest
from sympy import Matrix, primerange

from k3sextic.constructions import (LINE_SHAPES, ParameterError, QuaternionParams, VenkovSpec,
                                    check_odd_prime, check_sigma, default_line,
                                    hyperbolic_plane, lambda_minus, line_applies,
                                    p_times_inverse_integral, quaternion_order_gram,
                                    quaternion_params, root_lattice_gram, venkov_gram,
                                    venkov_inner_products, verify_lambda)
from k3sextic.lattice import determinant, discriminant_group, is_positive_definite, signature

from oracles import cartan


def test_prime_and_sigma_validation():
    for bad in (1, 2, 4, 9, -3, 0):
        with pytest.raises(ParameterError, match="p must be an odd prime"):
            check_odd_prime(bad)
    for bad in (0, 11, -1):
        with pytest.raises(ParameterError):
            check_sigma(bad)
    assert check_odd_prime(97) == 97


def test_hyperbolic_planes():
    assert hyperbolic_plane().gram == ((0, 1), (1, 0))
    u5 = hyperbolic_plane(5)
    assert u5.gram == ((0, 5), (5, 0))
    assert discriminant_group(u5) == (5, 5)
    assert tuple(signature(u5)) == (1, 1)


# with odd gamma the search returns the first reference row for each prime
@pytest.mark.parametrize("p, q, gamma", [(41, 3, 1), (53, 3, 1), (61, 11, 7), (101, 3, 1)])
def test_quaternion_defaults_odd_gamma(p, q, gamma):
    params = quaternion_params(p, odd_gamma=True)
    assert (params.q, params.gamma) == (q, gamma)
    assert params.problems() == []


def test_quaternion_smallest_search():
    assert (quaternion_params(61).q, quaternion_params(61).gamma) == (11, 4)
    assert (quaternion_params(5).q, quaternion_params(5).gamma) == (3, 1)
    # q = 3 is p itself and (-11|3) = 1, so 19 is the first admissible prime
    assert quaternion_params(3).q == 19


def test_quaternion_flags_and_overrides():
    odd = quaternion_params(13, odd_gamma=True)
    assert odd.gamma % 2 == 1 and not odd.problems()
    nz = quaternion_params(3, gamma_nonzero_mod_p=True)
    assert nz.gamma % 3 and not nz.problems()
    assert quaternion_params(61, q=43, gamma=5).q == 43
    with pytest.raises(ParameterError):
        quaternion_params(61, q=43, gamma=6)
    with pytest.raises(ParameterError):
        QuaternionParams(7, 5, 1).validate()


@pytest.mark.parametrize("p", list(primerange(3, 60)))
def test_quaternion_order_lattice(p):
    lat = quaternion_order_gram(quaternion_params(p))
    assert lat.is_even
    assert is_positive_definite(lat.gram)
    assert determinant(lat.gram) == p * p
    assert discriminant_group(lat) == (p, p)
    assert p_times_inverse_integral(lat, p)


@pytest.mark.parametrize("p, q, gamma", [(41, 11, 5), (53, 67, 9), (61, 43, 5), (101, 11, 3),
                                         (101, 163, 15)])
def test_quaternion_order_with_listed_parameters(p, q, gamma):
    lat = quaternion_order_gram(quaternion_params(p, q=q, gamma=gamma))
    assert lat.is_even and determinant(lat.gram) == p * p


def test_venkov_evenness_iff_congruence():
    for p in (3, 5, 7, 11):
        for r in range(2, 17, 2):
            for s in range(r + 1):
                spec = VenkovSpec(p, r, s)
                g = venkov_inner_products(spec)
                integral = all(x.denominator == 1 for row in g for x in row)
                even = integral and all(g[i][i] % 2 == 0 for i in range(r))
                assert even == spec.congruent, (p, r, s)


def test_venkov_lattices():
    for p in (3, 5, 7, 11, 13):
        for r in range(2, 21, 2):
            for s in range(r + 1):
                spec = VenkovSpec(p, r, s)
                if not spec.congruent:
                    with pytest.raises(ParameterError):
                        venkov_gram(spec)
                    continue
                lat = venkov_gram(spec)
                assert lat.is_even and is_positive_definite(lat.gram)
                assert determinant(lat.gram) == p ** s
                assert discriminant_group(lat) == (p,) * s


def test_venkov_checkerboard_and_e8():
    # V(p; 16, 0) is the D16^+ lattice: unimodular; V(p; 8, 0) is E8
    assert determinant(venkov_gram(VenkovSpec(3, 16, 0)).gram) == 1
    assert determinant(venkov_gram(VenkovSpec(7, 8, 0)).gram) == 1
    with pytest.raises(ParameterError):
        VenkovSpec(3, 1, 0)
    with pytest.raises(ParameterError):
        venkov_gram(VenkovSpec(3, 5, 1))


@pytest.mark.parametrize("kind", ["A1", "A4", "D4", "D5", "E6", "E7", "E8"])
def test_root_lattice_grams(kind):
    lat = root_lattice_gram(kind)
    letter, n = kind[0], int(kind[1:])
    # same lattice as the independently written Cartan matrix: equal determinants,
    # and the package's Gram is itself a Cartan matrix of the same type
    want = Matrix(cartan(letter, n)).det()
    assert determinant(lat.gram) == want
    assert sorted(sum(1 for x in row if x == -1) for row in lat.gram) == \
        sorted(sum(1 for x in row if x == -1) for row in cartan(letter, n))


def test_every_line_builds_lambda():
    for p in (3, 5, 7, 11, 13, 41):
        for sigma in range(1, 11):
            lines = [ln for ln in LINE_SHAPES if line_applies(ln, p, sigma)]
            assert default_line(p, sigma) in lines
            for line in lines:
                decomp = lambda_minus(p, sigma, line)
                assert all(verify_lambda(decomp.lattice, p, sigma).values()), (p, sigma, line)
            for line in set(LINE_SHAPES) - set(lines):
                with pytest.raises(ParameterError):
                    lambda_minus(p, sigma, line)


def test_lambda_decomposition_metadata():
    d = lambda_minus(5, 1)
    assert d.description == "U + H(5;q=3,gamma=1) + V(5;16,0)"
    assert d.to_json() == {"line": 2, "summands": ["U", "H(5;q=3,gamma=1)", "V(5;16,0)"],
                           "rank": 22}
    assert d.offset_of(2) == 6
    assert Fraction(determinant(d.lattice.gram)) == -(5 ** 2)
