"""Supernatural numbers: formal products of prime powers with exponents in N ∪ {∞}.

Only values with finitely many exceptions to a uniform default exponent
(``0`` or ``∞``) are representable.  ``FULL`` is ``∏_p p^∞``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

INF = math.inf


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Supernatural:
    explicit: tuple  # sorted (prime, exponent) pairs that differ from `default`
    default: float = 0

    def __post_init__(self):
        if self.default not in (0, INF):
            raise ValueError("default exponent must be 0 or infinity")
        last = 0
        for p, e in self.explicit:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p <= last:
                raise ValueError("explicit primes must be strictly increasing")
            if e == self.default or not (e == INF or (isinstance(e, int) and e >= 0)):
                raise ValueError(f"bad exponent {e!r} for {p}")
            last = p

    @classmethod
    def make(cls, exponents, default=0):
        """Canonical value from a ``{prime: exponent}`` mapping."""
        items = tuple(sorted((p, e) for p, e in exponents.items() if e != default))
        return cls(items, default)

    def exponent(self, p):
        for q, e in self.explicit:
            if q == p:
                return e
        return self.default

    def _primes(self, other):
        return sorted({p for p, _ in self.explicit} | {p for p, _ in other.explicit})

    def _combine(self, other, op):
        default = op(self.default, other.default)
        exps = {p: op(self.exponent(p), other.exponent(p)) for p in self._primes(other)}
        return Supernatural.make(exps, default)

    def __mul__(self, other):
        if isinstance(other, int):
            other = from_nat(other)
        return self._combine(other, lambda a, b: a + b)

    __rmul__ = __mul__

    def lcm(self, other):
        return self._combine(other, max)

    def gcd(self, other):
        return self._combine(other, min)

    def divides(self, other):
        if self.default > other.default:
            return False
        return all(self.exponent(p) <= other.exponent(p) for p in self._primes(other))

    def is_finite(self):
        return self.default == 0 and all(e != INF for _, e in self.explicit)

    def to_int(self):
        if not self.is_finite():
            raise ValueError("not a natural number")
        return math.prod(p ** e for p, e in self.explicit)

    def equals_full(self):
        return self.default == INF and not self.explicit

    def __str__(self):
        parts = []
        for p, e in self.explicit:
            parts.append(f"{p}^{'inf' if e == INF else e}")
        if self.default == INF or not parts:
            parts.append(f"rest^{'inf' if self.default == INF else 0}")
        return " * ".join(parts)

    @classmethod
    def parse(cls, text):
        exps = {}
        default = 0
        for term in text.split("*"):
            term = term.strip()
            m = re.fullmatch(r"(\d+|rest)\^(\d+|inf)", term)
            if not m:
                raise ValueError(f"bad supernatural factor {term!r}")
            e = INF if m.group(2) == "inf" else int(m.group(2))
            if m.group(1) == "rest":
                if e not in (0, INF):
                    raise ValueError("rest exponent must be 0 or inf")
                default = e
            else:
                exps[int(m.group(1))] = e
        return cls.make(exps, default)


def from_nat(n):
    if not isinstance(n, int) or n < 1:
        raise ValueError("from_nat needs a positive integer")
    return Supernatural.make(factorize(n))


def mul(a, b):
    return a * b


def lcm(a, b):
    return a.lcm(b)


def divides(a, b):
    return a.divides(b)


def equals_full(a):
    return a.equals_full()


FULL = Supernatural((), INF)
ONE = Supernatural((), 0)


def power_of(p, e=INF):
    return Supernatural.make({p: e})
