"""Truncated commutative coefficient rings over F_p.

A ``CoeffRing`` is F_p[g_1, ..., g_k] / (g_1^{c_1}, ..., g_k^{c_k}): a
finite local ring whose nilradical is spanned by the monomials that
contain at least one generator.  These rings host every auxiliary
parameter in the workbench (nilpotent translation coordinates, truncated
one-parameter variables, gauge coefficients).

An element is a unit exactly when its constant term is nonzero; this is
the criterion everything downstream (series inversion, Laurent unit
detection, matrix pivoting) relies on, and it is cross-checked against
brute-force inverse search in the test suite.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from .fp import check_prime, fp_inv


class RingMismatchError(ValueError):
    pass


class CoeffRing:
    """F_p with named nilpotent generators, each with its own cap."""

    def __init__(self, p: int, gens: Sequence[tuple[str, int]] = ()):
        check_prime(p)
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for name, cap in gens:
            if cap < 1:
                raise ValueError(f"cap for {name} must be >= 1")
        self.p = p
        self.gens = tuple((str(n), int(c)) for n, c in gens)
        self.names = tuple(n for n, _ in self.gens)
        self.caps = tuple(c for _, c in self.gens)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._zero_exp = (0,) * len(self.gens)

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, CoeffRing) and (self.p, self.gens) == (other.p, other.gens)

    def __hash__(self):
        return hash((self.p, self.gens))

    def __repr__(self):
        gens = ", ".join(f"{n}^{c}" for n, c in self.gens)
        return f"CoeffRing(F{self.p}[{gens}])" if gens else f"CoeffRing(F{self.p})"

    # -- constructors --------------------------------------------------------
    def zero(self) -> "CRElem":
        return CRElem(self, {})

    def one(self) -> "CRElem":
        return self.from_int(1)

    def from_int(self, c: int) -> "CRElem":
        c %= self.p
        return CRElem(self, {self._zero_exp: c} if c else {})

    def gen(self, name: str) -> "CRElem":
        i = self._index[name]
        if self.caps[i] < 2:
            return self.zero()
        e = [0] * len(self.gens)
        e[i] = 1
        return CRElem(self, {tuple(e): 1})

    def monomial(self, exps: Sequence[int], c: int = 1) -> "CRElem":
        exps = tuple(exps)
        if len(exps) != len(self.gens):
            raise ValueError("exponent vector has wrong length")
        if any(e < 0 or e >= cap for e, cap in zip(exps, self.caps)):
            return self.zero()
        c %= self.p
        return CRElem(self, {exps: c} if c else {})

    def extend(self, gens: Sequence[tuple[str, int]]) -> "CoeffRing":
        return CoeffRing(self.p, list(self.gens) + list(gens))

    # -- enumeration / randomness -------------------------------------------
    def size(self) -> int:
        n = self.p
        for cap in self.caps:
            n **= cap
        return n

    def elements(self) -> Iterator["CRElem"]:
        """All ring elements; only sensible for tiny rings."""
        monos = list(itertools.product(*[range(c) for c in self.caps])) or [()]
        for coeffs in itertools.product(range(self.p), repeat=len(monos)):
            d = {m: c for m, c in zip(monos, coeffs) if c}
            yield CRElem(self, d)

    def random(self, rng, max_terms: int = 4) -> "CRElem":
        e = self.zero()
        for _ in range(rng.randrange(max_terms + 1)):
            exps = tuple(rng.randrange(c) for c in self.caps)
            e = e + self.monomial(exps, rng.randrange(1, self.p))
        return e


class CRElem:
    """Element of a CoeffRing: sparse map from capped exponent vectors to F_p."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoeffRing, coeffs: Mapping[tuple, int]):
        self.ring = ring
        self.coeffs = dict(coeffs)

    # -- helpers -------------------------------------------------------------
    def _check(self, other: "CRElem") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def coerce(self, other) -> "CRElem":
        if isinstance(other, CRElem):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        raise TypeError(f"cannot coerce {other!r}")

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        o = self.coerce(other)
        p = self.ring.p
        d = dict(self.coeffs)
        for m, c in o.coeffs.items():
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return CRElem(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return CRElem(self.ring, {m: (-c) % p for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            return CRElem(self.ring, {m: v * c % self.ring.p for m, v in self.coeffs.items()})
        o = self.coerce(other)
        p = self.ring.p
        caps = self.ring.caps
        d: dict[tuple, int] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in o.coeffs.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if any(e >= cap for e, cap in zip(m, caps)):
                    continue
                v = (d.get(m, 0) + c1 * c2) % p
                if v:
                    d[m] = v
                else:
                    d.pop(m, None)
        return CRElem(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return isinstance(other, CRElem) and self.ring == other.ring and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.coeffs.items()))))

    # -- structure -------------------------------------------------------------
    def constant_term(self) -> int:
        return self.coeffs.get(self.ring._zero_exp, 0)

    def is_unit(self) -> bool:
        return self.constant_term() != 0

    def is_nilpotent(self) -> bool:
        return self.constant_term() == 0

    def nil_part(self) -> "CRElem":
        d = {m: c for m, c in self.coeffs.items() if any(m)}
        return CRElem(self.ring, d)

    def inv(self) -> "CRElem":
        """Inverse via geometric expansion of the nilpotent part."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError(f"{self} is not a unit")
        u = fp_inv(c0, self.ring.p)
        n = self.nil_part() * u
        acc = self.ring.one()
        term = self.ring.one()
        while True:
            term = -(term * n)
            if not term:
                break
            acc = acc + term
        return acc * u

    def frobenius(self) -> "CRElem":
        """p-th power; by the binomial theorem this is just the constant term."""
        return self.ring.from_int(self.constant_term())

    def total_degree_parts(self) -> dict[int, "CRElem"]:
        parts: dict[int, dict] = {}
        for m, c in self.coeffs.items():
            parts.setdefault(sum(m), {})[m] = c
        return {d: CRElem(self.ring, mm) for d, mm in parts.items()}

    def graded_part(self, k: int) -> "CRElem":
        d = {m: c for m, c in self.coeffs.items() if sum(m) == k}
        return CRElem(self.ring, d)

    def min_degree(self) -> int | None:
        if not self.coeffs:
            return None
        return min(sum(m) for m in self.coeffs)

    def partial(self, name: str) -> "CRElem":
        i = self.ring._index[name]
        p = self.ring.p
        d: dict[tuple, int] = {}
        for m, c in self.coeffs.items():
            if m[i] == 0:
                continue
            mm = list(m)
            mm[i] -= 1
            v = (d.get(tuple(mm), 0) + c * m[i]) % p
            if v:
                d[tuple(mm)] = v
            else:
                d.pop(tuple(mm), None)
        return CRElem(self.ring, d)

    def substitute(self, target: CoeffRing, images: Mapping[str, "CRElem"]) -> "CRElem":
        """Ring map into ``target`` sending each generator to its image.

        Generators absent from ``images`` must exist in the target under
        the same name.  Images must have vanishing p-th power where the
        source cap requires it; with caps <= p this holds automatically
        for nilpotent images and is not re-checked here.
        """
        imgs = []
        for n in self.ring.names:
            if n in images:
                imgs.append(images[n])
            else:
                imgs.append(target.gen(n))
        out = target.zero()
        for m, c in self.coeffs.items():
            term = target.from_int(c)
            for e, img in zip(m, imgs):
                for _ in range(e):
                    term = term * img
            out = out + term
        return out

    def rename(self, target: CoeffRing, mapping: Mapping[str, str]) -> "CRElem":
        images = {old: target.gen(new) for old, new in mapping.items()}
        return self.substitute(target, images)

    # -- display ---------------------------------------------------------------
    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items()):
            factors = [] if c != 1 or not any(m) else []
            if c != 1 or not any(m):
                factors.append(str(c))
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)


def brute_force_inverse(a: CRElem) -> CRElem | None:
    """Exhaustive inverse search; only for tiny rings (test oracle)."""
    one = a.ring.one()
    for b in a.ring.elements():
        if a * b == one:
            return b
    return None
