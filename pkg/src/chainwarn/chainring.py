"""Arithmetic in the finite chain rings GR(p^v, ell) = (Z/p^v)[x]/(f).

Elements are coefficient vectors ``(c_0, ..., c_{ell-1})`` with entries in
``[0, p^v)``.  The uniformizer is ``p``, so the valuation of an element is the
smallest p-adic valuation among its coefficients, capped at the length ``v``
(the zero element gets valuation ``v``).

Besides the scalar :class:`RingElement` API, :class:`ChainRing` exposes
vectorized operations on integer arrays of shape ``(..., ell)``; the
enumeration code in :mod:`chainwarn.warning` is built on those.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConditionError, RingMismatchError

MAX_RING_SIZE = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _fp_rem(a, b, p):
    """Remainder of ``a`` modulo the monic ``b`` over F_p (low-to-high lists)."""
    a = [c % p for c in a]
    db = len(b) - 1
    while len(a) - 1 >= db:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - db
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p by trial division."""
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] % p != 1:
        raise ValueError("expected a monic polynomial of positive degree")
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(reversed(tail)) + [1]
            if not _fp_rem(coeffs, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, ell: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``ell`` over F_p.

    Candidates ``x^ell + c_{ell-1} x^{ell-1} + ... + c_0`` are ordered by the
    tuple ``(c_{ell-1}, ..., c_0)``.  The result is returned low-to-high.
    """
    for tail in itertools.product(range(p), repeat=ell):
        coeffs = tuple(reversed(tail)) + (1,)
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise AssertionError(f"no irreducible of degree {ell} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class ChainRing:
    p: int
    ell: int
    v: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.ell < 1 or self.v < 1:
            raise ValueError("ell and v must be positive")
        if len(self.modulus) != self.ell + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree ell")
        if not is_irreducible_mod_p(self.modulus, self.p):
            raise ValueError("modulus is reducible mod p")

    # -- basic invariants -------------------------------------------------

    @cached_property
    def pv(self) -> int:
        return self.p ** self.v

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p ** self.ell

    @property
    def size(self) -> int:
        return self.p ** (self.v * self.ell)

    @cached_property
    def dtype(self):
        # int64 is safe while a full convolution row stays below 2**62
        return np.int64 if self.pv * self.pv * 2 * self.ell < 2 ** 62 else object

    def __repr__(self):
        if self.ell == 1:
            return f"Z/{self.pv}"
        return f"GR({self.pv},{self.ell})"

    def with_length(self, v: int) -> "ChainRing":
        """Same residue field and modulus, different length."""
        return ChainRing(self.p, self.ell, v, self.modulus)

    # -- elements -----------------------------------------------------------

    def element(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring != self:
                raise RingMismatchError(f"{x!r} is not in {self!r}")
            return x
        if isinstance(x, (int, np.integer)):
            coeffs = (int(x) % self.pv,) + (0,) * (self.ell - 1)
        else:
            x = [int(c) for c in x]
            if len(x) > self.ell:
                raise ValueError(f"{len(x)} coefficients for a degree-{self.ell} ring")
            coeffs = tuple(c % self.pv for c in x) + (0,) * (self.ell - len(x))
        return RingElement(self, coeffs)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.ell)

    @property
    def one(self) -> "RingElement":
        return self.element(1)

    @property
    def uniformizer(self) -> "RingElement":
        return self.element(self.p)

    def index(self, x: "RingElement") -> int:
        """Position of ``x`` in :meth:`elements` order."""
        return sum(c * self.pv ** i for i, c in enumerate(x.coeffs))

    def from_index(self, idx: int) -> "RingElement":
        coeffs = []
        for _ in range(self.ell):
            idx, c = divmod(idx, self.pv)
            coeffs.append(c)
        return RingElement(self, tuple(coeffs))

    def elements(self) -> Iterator["RingElement"]:
        """All elements, lexicographic with the top coefficient most significant."""
        if self.size > MAX_RING_SIZE:
            raise ValueError(f"{self!r} is too large to enumerate")
        for tail in itertools.product(range(self.pv), repeat=self.ell):
            yield RingElement(self, tuple(reversed(tail)))

    def coset_representatives(self, a: int) -> list["RingElement"]:
        """Canonical representatives of R / p^a: coefficients in ``[0, p^a)``."""
        if not 1 <= a <= self.v:
            raise ValueError(f"a={a} outside [1, {self.v}]")
        pa = self.p ** a
        return [RingElement(self, tuple(reversed(tail)))
                for tail in itertools.product(range(pa), repeat=self.ell)]

    def residue(self, x: "RingElement") -> tuple[int, ...]:
        """Image of ``x`` in the residue field, as a coefficient tuple mod p."""
        return tuple(c % self.p for c in x.coeffs)

    def lift(self, x: "RingElement") -> "RingElement":
        """Canonical lift (same coefficient integers) of an element of a
        ring with the same residue field and modulus into this ring."""
        if x.ring.p != self.p or x.ring.modulus != self.modulus:
            raise RingMismatchError(f"cannot move {x!r} into {self!r}")
        return self.element(x.coeffs)

    # -- scalar coefficient arithmetic -------------------------------------

    def _mul(self, a, b):
        ell, pv = self.ell, self.pv
        if ell == 1:
            return ((a[0] * b[0]) % pv,)
        prod = [0] * (2 * ell - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        m = self.modulus
        for k in range(2 * ell - 2, ell - 1, -1):
            c = prod[k] % pv
            if c:
                for i in range(ell):
                    prod[k - ell + i] -= c * m[i]
        return tuple(c % pv for c in prod[:ell])

    def _val(self, coeffs) -> int:
        p, v = self.p, self.v
        best = v
        for c in coeffs:
            if c:
                k = 0
                while c % p == 0:
                    c //= p
                    k += 1
                best = min(best, k)
        return best

    # -- vectorized arithmetic on arrays of shape (..., ell) ---------------

    def asarray(self, elems: Iterable["RingElement"]) -> np.ndarray:
        rows = [self.element(e).coeffs for e in elems]
        arr = np.array(rows, dtype=self.dtype)
        return arr.reshape(len(rows), self.ell)

    def vadd(self, a, b):
        return (a + b) % self.pv

    def vsub(self, a, b):
        return (a - b) % self.pv

    def vmul(self, a, b):
        ell, pv = self.ell, self.pv
        if ell == 1:
            return (a * b) % pv
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape[:-1] + (2 * ell - 1,)
        prod = np.zeros(shape, dtype=self.dtype)
        for i in range(ell):
            for j in range(ell):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= pv
        m = self.modulus
        for k in range(2 * ell - 2, ell - 1, -1):
            c = prod[..., k]
            for i in range(ell):
                if m[i]:
                    prod[..., k - ell + i] = (prod[..., k - ell + i] - c * m[i]) % pv
        return prod[..., :ell] % pv

    def vval(self, a) -> np.ndarray:
        """Valuations of an array of elements (zero maps to ``v``)."""
        out = np.zeros(a.shape[:-1], dtype=np.int64)
        pk = 1
        for _ in range(self.v):
            pk *= self.p
            hit = np.all(a % pk == 0, axis=-1)
            if not hit.any():
                break
            out += hit
        return out


@dataclass(frozen=True)
class RingElement:
    ring: ChainRing
    coeffs: tuple[int, ...]

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.ring.element(other).coeffs
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        pv = self.ring.pv
        return RingElement(self.ring, tuple((x + y) % pv for x, y in zip(self.coeffs, b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        pv = self.ring.pv
        return RingElement(self.ring, tuple((x - y) % pv for x, y in zip(self.coeffs, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        pv = self.ring.pv
        return RingElement(self.ring, tuple((-x) % pv for x in self.coeffs))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring._mul(self.coeffs, b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def valuation(self) -> int:
        return self.ring._val(self.coeffs)

    def inverse(self) -> "RingElement":
        """Inverse of a unit, via the order of the unit group."""
        r = self.ring
        units = r.size - r.p ** ((r.v - 1) * r.ell)
        inv = self ** (units - 1)
        if inv * self != r.one:
            raise ZeroDivisionError(f"{self} is not a unit in {r!r}")
        return inv

    def is_unit(self) -> bool:
        try:
            self.inverse()
        except ZeroDivisionError:
            return False
        return True

    def is_zero_divisor(self) -> bool:
        # in a chain ring of length v, x is a zero divisor iff x * p^(v-1) == 0
        return not (self * self.ring.p ** (self.ring.v - 1))

    def __str__(self):
        if self.ring.ell == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"

    def __repr__(self):
        return f"{self}@{self.ring!r}"


def make_chain_ring(p: int, ell: int = 1, v: int = 1) -> ChainRing:
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if ell < 1 or v < 1:
        raise ValueError("ell and v must be positive")
    if (p ** (v * ell)).bit_length() > 4096:
        raise ValueError("ring too large for exact desk-scale work")
    return ChainRing(p, ell, v, smallest_irreducible(p, ell))


def ring_arith(a: RingElement, b: RingElement | None, kind: str) -> RingElement:
    if kind == "neg":
        return -a
    if b is None:
        raise ValueError(f"{kind} needs two operands")
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring!r} vs {b.ring!r}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def pi_valuation(x: RingElement) -> int:
    return x.valuation()


def coset_representatives(ring: ChainRing, a: int) -> list[RingElement]:
    return ring.coset_representatives(a)


class SubsetSpec:
    """A finite list of distinct elements of one chain ring."""

    __slots__ = ("ring", "elements")

    def __init__(self, elements, ring: ChainRing | None = None):
        if ring is None:
            if not elements:
                raise ConditionError("empty subset needs an explicit ring")
            ring = elements[0].ring
        elems = tuple(ring.element(e) for e in elements)
        if len(set(elems)) != len(elems):
            raise ValueError("subset has duplicate elements")
        self.ring = ring
        self.elements = elems

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __eq__(self, other):
        return isinstance(other, SubsetSpec) and self.ring == other.ring \
            and self.elements == other.elements

    def __hash__(self):
        return hash((self.ring, self.elements))

    def __repr__(self):
        return "{" + ", ".join(map(str, self.elements)) + "}"

    def array(self) -> np.ndarray:
        return self.ring.asarray(self.elements)

    def satisfies(self, kind: str = "F") -> bool:
        return check_condition(self, kind)


def check_condition(s: SubsetSpec, kind: str = "F") -> bool:
    """Condition (F): pairwise differences are units.
    Condition (D): pairwise differences are not zero divisors."""
    if len(s) == 0:
        raise ConditionError("Conditions (F)/(D) need a nonempty set")
    if kind not in ("F", "D"):
        raise ValueError(f"unknown condition {kind!r}")
    for x, y in itertools.combinations(s.elements, 2):
        d = x - y
        if kind == "F" and not d.is_unit():
            return False
        if kind == "D" and d.is_zero_divisor():
            return False
    return True
