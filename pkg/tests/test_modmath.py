import random

import pytest

from splitvote.errors import (
    FieldMismatchError,
    NoInverseError,
    ParameterError,
)
from splitvote.modmath import (
    FIXTURE_FIELD,
    FieldElement,
    FieldParams,
    generate_params,
    in_subgroup,
    is_probable_prime,
    mod_exp,
    mod_inv,
    params_from_text,
    params_to_text,
    sample_subgroup_element,
)

# independent oracle: repeated multiplication
def naive_power(base, exponent, modulus):
    acc = 1
    for _ in range(exponent):
        acc = acc * base % modulus
    return acc


QUADRATIC_RESIDUES_23 = {1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18}


def test_fixture_field_constants():
    assert (FIXTURE_FIELD.p, FIXTURE_FIELD.q, FIXTURE_FIELD.g) == (23, 11, 2)


def test_mod_exp_frozen_values(field):
    assert mod_exp(field.element(2), 11).value == 1
    assert mod_exp(field.element(4), 3).value == 18


def test_mod_exp_matches_naive_oracle(field):
    for base in range(23):
        for exponent in range(30):
            got = mod_exp(field.element(base), exponent).value
            assert got == naive_power(base, exponent, 23)


def test_mod_exp_rejects_negative_exponent(field):
    with pytest.raises(ParameterError):
        mod_exp(field.element(2), -1)


def test_mod_inv_frozen_value(field):
    assert mod_inv(field.element(8)).value == 3


def test_mod_inv_exhaustive(field):
    for a in range(1, 23):
        inv = mod_inv(field.element(a)).value
        assert a * inv % 23 == 1


def test_mod_inv_of_zero(field):
    with pytest.raises(NoInverseError):
        mod_inv(field.element(0))


def test_subgroup_membership(field):
    members = {a for a in range(23) if in_subgroup(field.element(a))}
    assert members == QUADRATIC_RESIDUES_23
    assert not in_subgroup(field.element(5))
    assert not in_subgroup(field.element(0))


def test_subgroup_closed_under_multiplication(field):
    for a in QUADRATIC_RESIDUES_23:
        for b in QUADRATIC_RESIDUES_23:
            assert a * b % 23 in QUADRATIC_RESIDUES_23


def test_sample_subgroup_element_frozen(field):
    # u = 5 -> 25 mod 23 = 2
    class Fixed:
        def randrange(self, start, stop):
            return 5

    assert sample_subgroup_element(field, Fixed()).value == 2


def test_sample_subgroup_image_is_exactly_the_residues(field):
    class Each:
        def __init__(self, u):
            self.u = u

        def randrange(self, start, stop):
            return self.u

    image = {sample_subgroup_element(field, Each(u)).value for u in range(1, 23)}
    assert image == QUADRATIC_RESIDUES_23
    assert 0 not in image and 22 not in image


def test_sampling_is_uniform_on_the_subgroup(field):
    # each residue has exactly two square roots in [1, p-1]
    hits = {}
    for u in range(1, 23):
        v = u * u % 23
        hits[v] = hits.get(v, 0) + 1
    assert all(n == 2 for n in hits.values())


def test_field_element_range_check(field):
    with pytest.raises(ParameterError):
        FieldElement(23, field)
    with pytest.raises(ParameterError):
        FieldElement(-1, field)


def test_cross_field_operations_rejected(field):
    other = FieldParams(p=47, q=23, g=4)
    with pytest.raises(FieldMismatchError):
        field.element(2) * other.element(2)


def test_field_params_validation():
    with pytest.raises(ParameterError):
        FieldParams(p=21, q=10, g=2)  # p below the floor
    with pytest.raises(ParameterError):
        FieldParams(p=25, q=12, g=2)
    with pytest.raises(ParameterError):
        FieldParams(p=23, q=11, g=5)  # 5 is not a residue
    with pytest.raises(ParameterError):
        FieldParams(p=23, q=11, g=1)


def test_generate_params_is_deterministic():
    a = generate_params(16, random.Random(7))
    b = generate_params(16, random.Random(7))
    assert a == b


def test_generate_params_five_bits_gives_the_fixture_primes():
    params = generate_params(5, random.Random(1))
    assert (params.p, params.q) == (23, 11)
    assert in_subgroup(params.element(params.g))


def test_generate_params_hundred_bits():
    params = generate_params(100, random.Random(3))
    assert params.p >= 2**99
    assert params.p == 2 * params.q + 1
    assert pow(params.g, params.q, params.p) == 1


def test_generate_params_rejects_tiny_request():
    with pytest.raises(ParameterError):
        generate_params(4, random.Random(0))


def test_params_text_round_trip(field):
    text = params_to_text(field)
    assert text == "23\n11\n2\n"
    assert params_from_text(text) == field


def test_params_from_text_rejects_garbage():
    with pytest.raises(ParameterError):
        params_from_text("23\n11\n")
    with pytest.raises(ParameterError):
        params_from_text("23\neleven\n2\n")


def test_primality_spot_checks():
    assert is_probable_prime(2)
    assert is_probable_prime(23)
    assert is_probable_prime(999983)  # largest prime below 10**6
    assert not is_probable_prime(1)
    assert not is_probable_prime(999981)
    assert is_probable_prime(2**89 - 1)  # Mersenne prime
    assert not is_probable_prime(2**89 - 3)
    # Carmichael numbers must not fool the tester
    assert not is_probable_prime(3215031751)
