"""Modular arithmetic over a safe-prime field and its prime-order subgroup.

Every protocol value lives in Z_p* for a safe prime p = 2q + 1.  Signed
material is kept inside the order-q subgroup of quadratic residues, where
exponents are taken mod a prime and every nonzero element is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .errors import FieldMismatchError, NoInverseError, ParameterError

MIN_PRIME = 23
MILLER_RABIN_ROUNDS = 64

_TRIAL_DIVISION_BOUND = 10**6


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for n in range(2, int(limit**0.5) + 1):
        if flags[n]:
            flags[n * n :: n] = bytearray(len(flags[n * n :: n]))
    return [n for n in range(limit) if flags[n]]


_SMALL_PRIMES = _sieve(1000)


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Primality test: exact below 10**6, Miller-Rabin above.

    Witnesses are the first ``rounds`` small primes, so verdicts are
    reproducible across runs.
    """
    if n < 2:
        return False
    for w in _SMALL_PRIMES:
        if n == w:
            return True
        if n % w == 0:
            return False
    if n < _TRIAL_DIVISION_BOUND:
        # no prime factor <= sqrt(n) < 1000 was found, so n is prime
        return True
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES[:rounds]:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """Safe prime p = 2q + 1 and a generator g of the order-q subgroup."""

    p: int
    q: int
    g: int

    def __post_init__(self):
        if self.p < MIN_PRIME:
            raise ParameterError(f"p must be at least {MIN_PRIME}, got {self.p}")
        if self.p != 2 * self.q + 1:
            raise ParameterError("p must equal 2q + 1")
        if not is_probable_prime(self.q):
            raise ParameterError(f"q = {self.q} is not prime")
        if not is_probable_prime(self.p):
            raise ParameterError(f"p = {self.p} is not prime")
        if not 1 < self.g < self.p or pow(self.g, self.q, self.p) != 1:
            raise ParameterError(f"g = {self.g} does not generate the order-q subgroup")

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    def generator(self) -> FieldElement:
        return FieldElement(self.g, self)


@dataclass(frozen=True)
class FieldElement:
    """A residue mod p, pinned to the parameters it was created under."""

    value: int
    params: FieldParams

    def __post_init__(self):
        if not 0 <= self.value < self.params.p:
            raise ParameterError(f"value {self.value} outside [0, {self.params.p})")

    def _same_field(self, other: FieldElement) -> None:
        if self.params != other.params:
            raise FieldMismatchError("operands belong to different fields")

    def __mul__(self, other: FieldElement) -> FieldElement:
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return FieldElement(self.value * other.value % self.params.p, self.params)


def mod_exp(base: FieldElement, exponent: int) -> FieldElement:
    """base**exponent mod p via square-and-multiply."""
    if exponent < 0:
        raise ParameterError("exponent must be non-negative")
    return FieldElement(pow(base.value, exponent, base.params.p), base.params)


def mod_inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise NoInverseError("0 has no inverse mod p")
    return FieldElement(pow(a.value, -1, a.params.p), a.params)


def in_subgroup(a: FieldElement) -> bool:
    """True iff a is a nonzero quadratic residue, i.e. a**q = 1."""
    return a.value != 0 and pow(a.value, a.params.q, a.params.p) == 1


def sample_subgroup_element(params: FieldParams, rng: Random) -> FieldElement:
    """Uniform subgroup sample: square a uniform element of [1, p-1].

    The result is never 0 and never p - 1 (a non-residue).
    """
    u = rng.randrange(1, params.p)
    return FieldElement(u * u % params.p, params)


def generate_params(bit_length: int, rng: Random) -> FieldParams:
    """Fresh safe-prime field of exactly ``bit_length`` bits.

    Draws q until both q and 2q + 1 are prime, then picks a random square
    other than 1 as subgroup generator.  Deterministic for a fixed rng seed.
    """
    if bit_length < 5:
        raise ParameterError("bit_length must be at least 5 (p >= 23)")
    while True:
        q = rng.getrandbits(bit_length - 1)
        q |= (1 << (bit_length - 2)) | 1
        p = 2 * q + 1
        if p < MIN_PRIME:
            continue
        if not (is_probable_prime(q) and is_probable_prime(p)):
            continue
        while True:
            u = rng.randrange(2, p - 1)
            g = u * u % p
            if g != 1:
                break
        return FieldParams(p=p, q=q, g=g)


def params_to_text(params: FieldParams) -> str:
    """Canonical text form: decimal p, q, g, one per line."""
    return f"{params.p}\n{params.q}\n{params.g}\n"


def params_from_text(text: str) -> FieldParams:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) != 3:
        raise ParameterError(f"expected 3 lines (p, q, g), got {len(lines)}")
    try:
        p, q, g = (int(line) for line in lines)
    except ValueError as exc:
        raise ParameterError(f"non-decimal field parameter: {exc}") from None
    return FieldParams(p=p, q=q, g=g)


FIXTURE_FIELD = FieldParams(p=23, q=11, g=2)
