"""h-adic series and Laurent values with explicit precision windows.

``HSeries`` knows its coefficients on [0, N); ``HLaurent`` on [floor, N).
The floor is a *guarantee*: coefficients below it are exactly zero by
construction, so reads below the floor return 0.  Reads at or above the
precision raise ``PrecisionError`` -- silent truncation is the main
correctness hazard of the whole workbench, so nothing ever defaults to 0
above the window.

Arithmetic tracks windows exactly: products have floor v1+v2 and
precision min(N1+v2, N2+v1).
"""

from __future__ import annotations

from typing import Mapping

from .coeffs import CoeffRing, CRElem, RingMismatchError
from .fp import fp_inv


class PrecisionError(ArithmeticError):
    pass


def default_precision(p: int) -> int:
    return 2 * p


def default_floor(p: int, n: int) -> int:
    return -((2 * n + 2) * (p - 1) // 2) - 1


class HSeries:
    """Power series sum_{0<=i<N} a_i h^i known to precision N."""

    __slots__ = ("ring", "prec", "coeffs")

    def __init__(self, ring: CoeffRing, coeffs, prec: int):
        if prec < 1:
            raise ValueError("precision must be positive")
        self.ring = ring
        self.prec = prec
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        d = {}
        for i, c in items:
            if not isinstance(c, CRElem):
                c = ring.from_int(c)
            if i < 0:
                raise ValueError("HSeries has no negative coefficients")
            if i < prec and c:
                d[i] = c
        self.coeffs = d

    # -- constructors ----------------------------------------------------------
    @classmethod
    def constant(cls, c, ring: CoeffRing, prec: int) -> "HSeries":
        if isinstance(c, int):
            c = ring.from_int(c)
        return cls(ring, {0: c}, prec)

    @classmethod
    def one(cls, ring: CoeffRing, prec: int) -> "HSeries":
        return cls.constant(1, ring, prec)

    @classmethod
    def h(cls, ring: CoeffRing, prec: int) -> "HSeries":
        return cls(ring, {1: ring.one()}, prec)

    # -- access ----------------------------------------------------------------
    def coeff(self, i: int) -> CRElem:
        if i >= self.prec:
            raise PrecisionError(f"coefficient h^{i} beyond precision {self.prec}")
        if i < 0:
            return self.ring.zero()
        return self.coeffs.get(i, self.ring.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("series over different coefficient rings")

    # -- arithmetic --------------------------------------------------------------
    def _coerce(self, other) -> "HSeries":
        if isinstance(other, HSeries):
            self._check(other)
            return other
        if isinstance(other, (int, CRElem)):
            return HSeries.constant(other, self.ring, self.prec)
        raise TypeError(f"cannot coerce {other!r}")

    def __add__(self, other):
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        d = {i: c for i, c in self.coeffs.items() if i < prec}
        for i, c in o.coeffs.items():
            if i >= prec:
                continue
            v = d.get(i, self.ring.zero()) + c
            if v:
                d[i] = v
            else:
                d.pop(i, None)
        return HSeries(self.ring, d, prec)

    __radd__ = __add__

    def __neg__(self):
        return HSeries(self.ring, {i: -c for i, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        d: dict[int, CRElem] = {}
        for i, a in self.coeffs.items():
            for j, b in o.coeffs.items():
                k = i + j
                if k >= prec:
                    continue
                v = d.get(k, self.ring.zero()) + a * b
                if v:
                    d[k] = v
                else:
                    d.pop(k, None)
        return HSeries(self.ring, d, prec)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, CRElem)):
            other = HSeries.constant(other, self.ring, self.prec)
        if not isinstance(other, HSeries) or self.ring != other.ring:
            return NotImplemented
        prec = min(self.prec, other.prec)
        for i in set(self.coeffs) | set(other.coeffs):
            if i >= prec:
                raise PrecisionError("comparison not decisive within common precision")
        return {i: c for i, c in self.coeffs.items()} == dict(other.coeffs)

    def inv(self) -> "HSeries":
        """Inverse of a series whose constant coefficient is a unit."""
        c0 = self.coeff(0)
        if not c0.is_unit():
            raise ZeroDivisionError("constant coefficient is not a unit")
        c0i = c0.inv()
        rest = (self - HSeries.constant(c0, self.ring, self.prec)) * c0i
        acc = HSeries.one(self.ring, self.prec)
        term = HSeries.one(self.ring, self.prec)
        for _ in range(self.prec + 1):
            term = -(term * rest)
            if term.is_zero():
                break
            acc = acc + term
        return acc * c0i

    def truncate(self, prec: int) -> "HSeries":
        return HSeries(self.ring, {i: c for i, c in self.coeffs.items() if i < prec}, min(prec, self.prec))

    def as_laurent(self, floor: int = 0) -> "HLaurent":
        if floor > 0:
            raise ValueError("floor must be <= 0 for a series")
        return HLaurent(self.ring, dict(self.coeffs), floor, self.prec)

    def __repr__(self):
        return _render(self.coeffs, self.prec)


class HLaurent:
    """Laurent value with coefficients on [floor, prec); floor <= 0 allowed.

    Coefficients below the floor are exactly zero by construction.
    """

    __slots__ = ("ring", "floor", "prec", "coeffs")

    def __init__(self, ring: CoeffRing, coeffs, floor: int, prec: int):
        if prec <= floor:
            raise ValueError(f"empty window [{floor}, {prec})")
        self.ring = ring
        self.floor = floor
        self.prec = prec
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs, start=floor)
        d = {}
        for i, c in items:
            if not isinstance(c, CRElem):
                c = ring.from_int(c)
            if i < floor:
                raise ValueError("coefficient below declared floor")
            if i < prec and c:
                d[i] = c
        self.coeffs = d

    @classmethod
    def constant(cls, c, ring: CoeffRing, prec: int, floor: int = 0) -> "HLaurent":
        if isinstance(c, int):
            c = ring.from_int(c)
        return cls(ring, {0: c} if floor <= 0 else {}, floor, prec)

    @classmethod
    def one(cls, ring: CoeffRing, prec: int, floor: int = 0) -> "HLaurent":
        return cls.constant(1, ring, prec, floor)

    @classmethod
    def h_power(cls, k: int, ring: CoeffRing, prec: int) -> "HLaurent":
        return cls(ring, {k: ring.one()}, min(k, 0), max(prec, k + 1))

    # -- access -----------------------------------------------------------------
    def coeff(self, i: int) -> CRElem:
        if i >= self.prec:
            raise PrecisionError(f"coefficient h^{i} beyond precision {self.prec}")
        if i < self.floor:
            return self.ring.zero()
        return self.coeffs.get(i, self.ring.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int | None:
        if not self.coeffs:
            return None
        return min(self.coeffs)

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("values over different coefficient rings")

    def _coerce(self, other) -> "HLaurent":
        if isinstance(other, HLaurent):
            self._check(other)
            return other
        if isinstance(other, HSeries):
            self._check(other)
            return other.as_laurent()
        if isinstance(other, (int, CRElem)):
            return HLaurent.constant(other, self.ring, self.prec, min(self.floor, 0))
        raise TypeError(f"cannot coerce {other!r}")

    # -- arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        floor = min(self.floor, o.floor)
        prec = min(self.prec, o.prec)
        d = {i: c for i, c in self.coeffs.items() if i < prec}
        for i, c in o.coeffs.items():
            if i >= prec:
                continue
            v = d.get(i, self.ring.zero()) + c
            if v:
                d[i] = v
            else:
                d.pop(i, None)
        return HLaurent(self.ring, d, floor, prec)

    __radd__ = __add__

    def __neg__(self):
        return HLaurent(self.ring, {i: -c for i, c in self.coeffs.items()}, self.floor, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        floor = self.floor + o.floor
        prec = min(self.prec + o.floor, o.prec + self.floor)
        d: dict[int, CRElem] = {}
        for i, a in self.coeffs.items():
            for j, b in o.coeffs.items():
                k = i + j
                if k >= prec:
                    continue
                v = d.get(k, self.ring.zero()) + a * b
                if v:
                    d[k] = v
                else:
                    d.pop(k, None)
        return HLaurent(self.ring, d, floor, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HLaurent":
        """Multiply by h^k exactly (window shifts with the value)."""
        return HLaurent(self.ring, {i + k: c for i, c in self.coeffs.items()},
                        self.floor + k, self.prec + k)

    def __eq__(self, other):
        if isinstance(other, (int, CRElem, HSeries)):
            other = self._coerce(other)
        if not isinstance(other, HLaurent) or self.ring != other.ring:
            return NotImplemented
        prec = min(self.prec, other.prec)
        for i in set(self.coeffs) | set(other.coeffs):
            if i >= prec:
                raise PrecisionError("comparison not decisive within common precision")
        return dict(self.coeffs) == dict(other.coeffs)

    def as_series(self) -> HSeries:
        if any(i < 0 for i in self.coeffs):
            raise ValueError("value has h-poles")
        return HSeries(self.ring, dict(self.coeffs), self.prec)

    def truncate(self, prec: int) -> "HLaurent":
        prec = min(prec, self.prec)
        return HLaurent(self.ring, {i: c for i, c in self.coeffs.items() if i < prec}, self.floor, prec)

    def widen(self, floor: int | None = None, prec: int | None = None) -> "HLaurent":
        """Assert-free widening is forbidden; only the floor may move down."""
        f = self.floor if floor is None else min(floor, self.floor)
        n = self.prec if prec is None else min(prec, self.prec)
        return HLaurent(self.ring, dict(self.coeffs), f, n)

    # -- unit structure -------------------------------------------------------------
    def unit_index(self) -> int | None:
        """Lowest index whose coefficient is a ring unit, if visible."""
        for i in sorted(self.coeffs):
            if self.coeffs[i].is_unit():
                return i
        return None

    def is_unit(self) -> bool:
        """True iff some a_{i0} is a unit and a_j is nilpotent for j < i0.

        Within the window this criterion is complete: nilpotent
        coefficients are nilpotent, and the first unit coefficient makes
        the tail irrelevant.  If no unit coefficient is visible and some
        nilpotent coefficients are, the window cannot decide and we
        raise.
        """
        idx = self.unit_index()
        if idx is not None:
            return all(self.coeffs[j].is_nilpotent() for j in self.coeffs if j < idx)
        if not self.coeffs:
            return False
        raise PrecisionError("window shows only nilpotent coefficients; unit test undecidable")

    def unit_decompose(self):
        """Factor a unit as r * w * h^m * w_hat.

        r is a unit of the coefficient ring, w a series with constant
        term exactly 1, m an integer, and w_hat = 1 + (nilpotent
        coefficients) * negative h powers.  The four factors are the
        canonical direct-product components and multiply back exactly.
        """
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        m = self.unit_index()
        v = self.shift(-m)
        # strip the principal (negative) part into w_hat
        what = HLaurent.one(self.ring, v.prec, min(v.floor, 0))
        guard = 0
        while True:
            neg = {i: c for i, c in v.coeffs.items() if i < 0}
            if not neg:
                break
            guard += 1
            if guard > 200:
                raise ArithmeticError("unit decomposition failed to converge")
            ip = HLaurent(self.ring, {i: c for i, c in v.coeffs.items() if i >= 0}, 0, v.prec)
            step = HLaurent(self.ring, neg, v.floor, v.prec) * ip.as_series().inv().as_laurent()
            w1 = HLaurent.one(self.ring, v.prec, min(v.floor, 0)) + \
                HLaurent(self.ring, {i: c for i, c in step.coeffs.items() if i < 0}, step.floor, step.prec)
            what = what * w1
            v = v * _what_inverse(w1)
        r = v.coeff(0)
        w = (v * HLaurent.constant(r.inv(), self.ring, v.prec)).as_series()
        return r, w, m, what

    def inv(self) -> "HLaurent":
        r, w, m, what = self.unit_decompose()
        out = HLaurent.constant(r.inv(), self.ring, w.prec)
        out = out * w.inv().as_laurent()
        out = out.shift(-m)
        return out * _what_inverse(what)

    def __repr__(self):
        return _render(self.coeffs, self.prec, self.floor)


def _what_inverse(what: HLaurent) -> HLaurent:
    """Inverse of 1 + (nilpotent principal part): finite Neumann series."""
    ring = what.ring
    n = what - HLaurent.one(ring, what.prec, what.floor)
    acc = HLaurent.one(ring, what.prec, what.floor)
    term = HLaurent.one(ring, what.prec, what.floor)
    guard = 0
    while True:
        term = -(term * n)
        if term.is_zero():
            break
        guard += 1
        if guard > 200:
            raise ArithmeticError("principal part is not nilpotent")
        acc = acc + term
    return acc


def _render(coeffs: dict, prec: int, floor: int = 0) -> str:
    if not coeffs:
        return f"O(h^{prec})"
    parts = []
    for i in sorted(coeffs):
        c = coeffs[i]
        cs = f"({c})" if len(c.coeffs) > 1 else f"{c}"
        if i == 0:
            parts.append(cs)
        elif i == 1:
            parts.append(f"{cs}*h")
        else:
            parts.append(f"{cs}*h^{i}")
    return " + ".join(parts) + f" + O(h^{prec})"
