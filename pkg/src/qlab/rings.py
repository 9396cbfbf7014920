"""Brute-force arithmetic in Z/n, used as an oracle independent of the quantale code."""

from __future__ import annotations

from math import gcd
from typing import Iterable

from .order import InputError


def multiplicative_closure(n: int, residues: Iterable[int]) -> frozenset[int]:
    """Smallest multiplicative subset of Z/n containing 1 and ``residues``."""
    out = {1 % n}
    frontier = [r % n for r in residues]
    while frontier:
        r = frontier.pop()
        if r in out:
            continue
        out.add(r)
        frontier.extend((r * t) % n for t in list(out))
    return frozenset(out)


def ideal_elements(n: int, d: int) -> frozenset[int]:
    """Elements of the ideal generated by d in Z/n."""
    return frozenset((d * k) % n for k in range(n))


def ideal_generator(n: int, elems: Iterable[int]) -> int:
    """The divisor d of n with (d) equal to the ideal spanned by ``elems``."""
    g = n
    for e in elems:
        g = gcd(g, e % n)
    return g


def saturate_ideal(n: int, d: int, S: Iterable[int]) -> int:
    """x_S = {r : s r in x for some s in S} for x = (d); returned as a divisor."""
    x = ideal_elements(n, d)
    S = list(S)
    sat = [r for r in range(n) if any((s * r) % n in x for s in S)]
    return ideal_generator(n, sat)


def ring_localization_modulus(n: int, S: Iterable[int]) -> int:
    """(Z/n)_S is Z/k for the k returned here (k = 1 means the zero ring).

    The kernel of Z/n -> (Z/n)_S is {x : s x = 0 for some s in S}; once it is
    divided out, every element of S must be a unit, which is checked.
    """
    S = multiplicative_closure(n, S)
    kernel = [x for x in range(n) if any((s * x) % n == 0 for s in S)]
    k = ideal_generator(n, kernel)
    for s in S:
        if k > 1 and not any((s * t) % k == 1 % k for t in range(k)):
            raise AssertionError(f"{s} is not invertible in Z/{k}")
    return k


def is_radical(n: int, d: int) -> bool:
    """Is (d) a radical ideal of Z/n? Brute force over elements."""
    x = ideal_elements(n, d)
    for r in range(n):
        p = r
        for _ in range(n.bit_length() + 1):
            if p in x:
                if r not in x:
                    return False
                break
            p = (p * r) % n
    return True


def prime_divisors(n: int) -> list[int]:
    out, p, m = [], 2, n
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def maximal_ideals(n: int) -> list[int]:
    """Maximal ideals of Z/n as divisors: the primes dividing n."""
    if n < 2:
        raise InputError("Z/n needs n >= 2")
    return prime_divisors(n)
