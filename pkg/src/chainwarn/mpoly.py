"""Sparse multivariate polynomials over a chain ring.

Text grammar (used by the CLI): terms ``c*t1^a*t2^b`` joined by ``+`` or
``-``.  The coefficient ``c`` is an integer or a coefficient-vector literal
such as ``[3,1]`` (meaning ``3 + x``); it may be omitted.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

import numpy as np

from .chainring import ChainRing, RingElement
from .errors import RingMismatchError


class MPoly:
    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: ChainRing, nvars: int, terms: Mapping | None = None):
        if nvars < 1:
            raise ValueError("nvars must be at least 1")
        self.ring = ring
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp) < 0:
                raise ValueError(f"bad exponent vector {exp}")
            c = ring.element(c)
            if exp in clean:
                c = clean[exp] + c
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.terms = clean

    @classmethod
    def constant(cls, ring, nvars, c) -> "MPoly":
        return cls(ring, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ring, nvars, i) -> "MPoly":
        """The variable ``t_{i+1}`` (0-based index ``i``)."""
        exp = [0] * nvars
        exp[i] = 1
        return cls(ring, nvars, {tuple(exp): 1})

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring or other.nvars != self.nvars:
                raise RingMismatchError("polynomials over different rings or arities")
            return other
        return MPoly.constant(self.ring, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MPoly(self.ring, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return MPoly(self.ring, self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.constant(self.ring, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.ring, self.nvars, self.terms) == (other.ring, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.ring, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int | None:
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> RingElement:
        return self.terms.get((0,) * self.nvars, self.ring.zero)

    def is_constant(self) -> bool:
        deg = self.total_degree()
        return deg is None or deg == 0

    def lift(self, ring: ChainRing) -> "MPoly":
        """Move to a ring with the same residue field, keeping coefficient integers."""
        return MPoly(ring, self.nvars, {e: ring.lift(c) for e, c in self.terms.items()})

    def __call__(self, point: Sequence) -> RingElement:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        ring = self.ring
        xs = [ring.element(x) for x in point]
        total = ring.zero
        for exp, c in self.terms.items():
            term = c
            for x, k in zip(xs, exp):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an array of points of shape ``(M, nvars, ell)``."""
        ring = self.ring
        if points.ndim != 3 or points.shape[1] != self.nvars or points.shape[2] != ring.ell:
            raise ValueError(f"points must have shape (M, {self.nvars}, {ring.ell})")
        m = points.shape[0]
        out = np.zeros((m, ring.ell), dtype=ring.dtype)
        powers: dict = {}

        def power(i, k):
            if (i, k) not in powers:
                if k == 1:
                    powers[i, k] = points[:, i, :]
                else:
                    powers[i, k] = ring.vmul(power(i, k - 1), points[:, i, :])
            return powers[i, k]

        for exp, c in self.terms.items():
            term = np.broadcast_to(np.array(c.coeffs, dtype=ring.dtype), (m, ring.ell))
            for i, k in enumerate(exp):
                if k:
                    term = ring.vmul(term, power(i, k))
            out = ring.vadd(out, term)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = [f"t{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(exp) if k]
            if not mono:
                parts.append(str(c))
            elif c == self.ring.one:
                parts.append("*".join(mono))
            else:
                parts.append("*".join([str(c)] + mono))
        return " + ".join(parts)

    def __repr__(self):
        return f"MPoly({self}, {self.ring!r}, nvars={self.nvars})"


def poly_eval(f: MPoly, point: Sequence) -> RingElement:
    return f(point)


def total_degree(f: MPoly) -> int | None:
    return f.total_degree()


def poly_product_expand(fs: Iterable[MPoly], ring: ChainRing | None = None,
                        nvars: int | None = None) -> MPoly:
    """Fully expanded product; the empty product needs ``ring`` and ``nvars``."""
    fs = list(fs)
    if not fs:
        if ring is None or nvars is None:
            raise ValueError("empty product needs ring and nvars")
        return MPoly.constant(ring, nvars, 1)
    out = fs[0]
    for f in fs[1:]:
        out = out * f
    return out


_VAR = re.compile(r"^t(\d+)(?:\^(\d+))?$")


def parse_coefficient(text: str, ring: ChainRing) -> RingElement:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"bad coefficient literal {text!r}")
        body = text[1:-1].strip()
        return ring.element([int(c) for c in body.split(",")] if body else [0])
    return ring.element(int(text))


def parse_poly(text: str, ring: ChainRing, nvars: int) -> MPoly:
    # split on +/- outside brackets (coefficient literals may hold signs)
    tokens, depth, cur, sign = [], 0, "", 1
    for ch in text.strip():
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif depth == 0 and ch in "+-":
            s = 1 if ch == "+" else -1
            if cur.strip():
                tokens.append((sign, cur))
                cur, sign = "", s
            else:
                sign *= s
            continue
        cur += ch
    if not cur.strip():
        raise ValueError(f"cannot parse polynomial {text!r}")
    tokens.append((sign, cur))

    terms: dict = {}
    for sign, tok in tokens:
        coeff = ring.one
        exp = [0] * nvars
        for factor in tok.split("*"):
            factor = factor.strip()
            m = _VAR.match(factor)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= nvars:
                    raise ValueError(f"variable t{i} out of range for {nvars} variables")
                exp[i - 1] += int(m.group(2) or 1)
            else:
                coeff = coeff * parse_coefficient(factor, ring)
        if sign < 0:
            coeff = -coeff
        e = tuple(exp)
        terms[e] = terms[e] + coeff if e in terms else coeff
    return MPoly(ring, nvars, terms)
