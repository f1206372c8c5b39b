"""Truncated trivariate power series in ``z, u, r`` with exact rational
coefficients.

Only ``z`` is truncated: a series keeps the coefficients of ``z**i`` for
``i <= exact``, each one a polynomial in ``u`` and ``r``.  Internally each
z-degree is a 2-D numpy object array of integer numerators indexed by the
``u`` and ``r`` exponents, and the whole series shares one positive
denominator.  Python ints never overflow, so every operation is exact.

``trunc`` is the nominal truncation requested by the caller.  ``exact`` is the
highest z-degree whose coefficient is known; it drops below ``trunc`` after a
division by a power of ``z`` and every consumer propagates it.  Asking for a
coefficient above ``exact`` raises :class:`BeyondTruncation` instead of
returning a silently wrong value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import (
    BeyondTruncation,
    DivisionRemainder,
    NonUnitConstantTerm,
    NonZeroConstantTerm,
    TruncationMismatch,
)

Rational = Union[int, Fraction]
Plane = Optional[np.ndarray]


def _plane(shape: tuple[int, int]) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def _trim(p: np.ndarray) -> Plane:
    """Drop trailing all-zero rows and columns; ``None`` when nothing is left."""
    if p.shape == (1, 1):
        return p if p[0, 0] else None
    rows = np.flatnonzero(p.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(p.any(axis=0))
    return p[: rows[-1] + 1, : cols[-1] + 1]


def _add_into(dst_list: list[Plane], i: int, src: np.ndarray, j0: int = 0, k0: int = 0,
              coef: int = 1) -> None:
    """``dst_list[i][j0:, k0:] += coef * src``, growing the plane as needed."""
    J, K = src.shape
    dst = dst_list[i]
    need = (j0 + J, k0 + K)
    if dst is None:
        dst = _plane(need)
    elif dst.shape[0] < need[0] or dst.shape[1] < need[1]:
        grown = _plane((max(dst.shape[0], need[0]), max(dst.shape[1], need[1])))
        grown[: dst.shape[0], : dst.shape[1]] = dst
        dst = grown
    view = dst[j0 : j0 + J, k0 : k0 + K]
    if coef == 1:
        view += src
    elif coef == -1:
        view -= src
    else:
        view += coef * src
    dst_list[i] = dst


# ---------------------------------------------------------------------------
# univariate integer products


def _poly_mul(a: Sequence[int], b: Sequence[int], limit: int) -> list[int]:
    """First ``limit + 1`` coefficients of the product of two integer
    polynomials, by packing each into one big integer (Kronecker substitution)."""
    a = list(a[: limit + 1])
    b = list(b[: limit + 1])
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a or not b:
        return [0] * (limit + 1)
    if len(a) < 8 or len(b) < 8:
        out = [0] * (limit + 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: limit + 1 - i]):
                    out[i + j] += x * y
        return out
    bound = max(abs(x) for x in a) * max(abs(y) for y in b) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nbytes
    full = len(a) + len(b) - 1
    slots = min(full, limit + 1)
    half = 1 << (bits - 1)
    # adding `half` to every slot makes each slot non-negative, so slots read off directly
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * full, "little")
    raw = (_pack(a, nbytes) * _pack(b, nbytes) + offset).to_bytes(nbytes * full, "little")
    out = [int.from_bytes(raw[s * nbytes : (s + 1) * nbytes], "little") - half
           for s in range(slots)]
    out.extend([0] * (limit + 1 - slots))
    return out


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


# ---------------------------------------------------------------------------


class TriSeries:
    """Immutable truncated series ``sum c[i,j,k] z**i u**j r**k``."""

    __slots__ = ("trunc", "exact", "_planes", "_den")

    def __init__(self, trunc: int, planes: list[Plane], den: int = 1,
                 exact: Optional[int] = None):
        if trunc < 0:
            raise ValueError("truncation must be non-negative")
        exact = trunc if exact is None else min(exact, trunc)
        if exact < -1:
            exact = -1
        planes = list(planes[: exact + 1]) + [None] * max(0, exact + 1 - len(planes))
        self.trunc = trunc
        self.exact = exact
        self._planes = [None if p is None else _trim(p) for p in planes]
        self._den = den
        self._normalize()

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int) -> "TriSeries":
        return cls(trunc, [])

    @classmethod
    def one(cls, trunc: int) -> "TriSeries":
        return cls.monomial(trunc, 0, 0, 0)

    @classmethod
    def monomial(cls, trunc: int, i: int, j: int = 0, k: int = 0,
                 coeff: Rational = 1) -> "TriSeries":
        return cls.from_terms(trunc, {(i, j, k): coeff})

    @classmethod
    def from_terms(cls, trunc: int, terms: Mapping[tuple[int, int, int], Rational]) -> "TriSeries":
        fracs = {key: Fraction(v) for key, v in terms.items() if v}
        den = 1
        for v in fracs.values():
            den = math.lcm(den, v.denominator)
        planes: list[Plane] = [None] * (trunc + 1)
        for (i, j, k), v in fracs.items():
            if min(i, j, k) < 0:
                raise ValueError(f"negative exponent in term {(i, j, k)}")
            if i > trunc:
                continue
            src = np.array([[v.numerator * (den // v.denominator)]], dtype=object)
            _add_into(planes, i, src, j, k)
        return cls(trunc, planes, den)

    @classmethod
    def _from_ints(cls, trunc: int, nums: Sequence[int], den: int = 1,
                   exact: Optional[int] = None) -> "TriSeries":
        planes = [np.array([[c]], dtype=object) if c else None for c in nums]
        return cls(trunc, planes, den, exact)

    @classmethod
    def univariate(cls, trunc: int, coeffs: Iterable[Rational]) -> "TriSeries":
        return cls.from_terms(trunc, {(i, 0, 0): c for i, c in enumerate(coeffs)})

    # -- bookkeeping -------------------------------------------------------

    def _normalize(self) -> None:
        if self._den == 1:
            return
        g = self._den
        for p in self._planes:
            if p is None:
                continue
            for x in p.flat:
                if x:
                    g = math.gcd(g, x)
                    if g == 1:
                        return
        if g > 1:
            self._planes = [None if p is None else p // g for p in self._planes]
            self._den //= g

    def _like(self, planes: list[Plane], den: int, exact: int) -> "TriSeries":
        return TriSeries(self.trunc, planes, den, exact)

    def _check(self, other: "TriSeries") -> None:
        if not isinstance(other, TriSeries):
            raise TypeError(f"expected TriSeries, got {type(other).__name__}")
        if other.trunc != self.trunc:
            raise TruncationMismatch(f"truncations differ: {self.trunc} vs {other.trunc}")

    @property
    def denominator(self) -> int:
        return self._den

    def low_degree(self) -> int:
        """Lowest z-degree with a nonzero coefficient, or ``exact + 1``."""
        for i, p in enumerate(self._planes):
            if p is not None:
                return i
        return self.exact + 1

    def nnz(self) -> int:
        return sum(int(np.count_nonzero(p != 0)) for p in self._planes if p is not None)

    def is_univariate(self) -> bool:
        return all(p is None or p.shape == (1, 1) for p in self._planes)

    def is_zero(self) -> bool:
        return all(p is None for p in self._planes)

    def with_exact(self, exact: int) -> "TriSeries":
        """Forget coefficients above ``exact``."""
        return self._like(self._planes, self._den, min(exact, self.exact))

    def retruncate(self, trunc: int) -> "TriSeries":
        return TriSeries(trunc, self._planes, self._den, min(trunc, self.exact))

    # -- access ------------------------------------------------------------

    def coefficient(self, i: int, j: int = 0, k: int = 0) -> Fraction:
        if i > self.trunc:
            raise BeyondTruncation(f"z-degree {i} beyond truncation {self.trunc}")
        if i > self.exact:
            raise BeyondTruncation(f"z-degree {i} beyond reliable degree {self.exact}")
        p = self._planes[i]
        if p is None or j >= p.shape[0] or k >= p.shape[1]:
            return Fraction(0)
        return Fraction(p[j, k], self._den)

    def terms(self) -> Iterator[tuple[int, int, int, Fraction]]:
        """Nonzero terms in increasing ``(i, j, k)`` order."""
        for i, p in enumerate(self._planes):
            if p is None:
                continue
            for j, k in zip(*np.nonzero(p != 0)):
                yield i, int(j), int(k), Fraction(p[j, k], self._den)

    def as_dict(self) -> dict[tuple[int, int, int], Fraction]:
        return {(i, j, k): c for i, j, k, c in self.terms()}

    def univariate_coefficients(self) -> list[Fraction]:
        """Coefficients of ``z**0 .. z**exact`` of a series free of ``u``, ``r``."""
        if not self.is_univariate():
            raise ValueError("series still depends on u or r")
        return [Fraction(0) if p is None else Fraction(p[0, 0], self._den) for p in self._planes]

    def integer_coefficients(self) -> list[int]:
        """Like :meth:`univariate_coefficients` but insists on integers."""
        from .errors import IntegralityViolation

        if self._den != 1:
            bad = next(c for c in self.univariate_coefficients() if c.denominator != 1)
            raise IntegralityViolation(f"non-integral coefficient {bad}")
        return [int(c) for c in self.univariate_coefficients()]

    def _univariate_numerators(self) -> list[int]:
        return [0 if p is None else p[0, 0] for p in self._planes]

    def dump(self) -> list[dict]:
        out = []
        for i, j, k, c in self.terms():
            out.append({"i": i, "j": j, "k": k, "num": c.numerator, "den": c.denominator})
        return out

    def __repr__(self) -> str:
        shown = []
        for n, (i, j, k, c) in enumerate(self.terms()):
            if n == 6:
                shown.append("...")
                break
            shown.append(f"{c}*z^{i}u^{j}r^{k}")
        body = " + ".join(shown) or "0"
        return f"TriSeries({body}; trunc={self.trunc}, exact={self.exact})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TriSeries):
            return NotImplemented
        if (self.trunc, self.exact, self._den) != (other.trunc, other.exact, other._den):
            return False
        for p, q in zip(self._planes, other._planes):
            if (p is None) != (q is None):
                return False
            if p is not None and (p.shape != q.shape or not (p == q).all()):
                return False
        return True

    __hash__ = None  # type: ignore[assignment]

    # -- ring operations -----------------------------------------------------

    def add(self, other: "TriSeries") -> "TriSeries":
        self._check(other)
        den = math.lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        exact = min(self.exact, other.exact)
        if self.is_univariate() and other.is_univariate():
            xs, ys = self._univariate_numerators(), other._univariate_numerators()
            return TriSeries._from_ints(self.trunc, [fa * x + fb * y for x, y in zip(xs, ys)],
                                        den, exact)
        planes: list[Plane] = [None] * (exact + 1)
        for i in range(exact + 1):
            for p, f in ((self._planes[i], fa), (other._planes[i], fb)):
                if p is not None:
                    _add_into(planes, i, p, coef=f)
        return self._like(planes, den, exact)

    def scale(self, q: Rational) -> "TriSeries":
        q = Fraction(q)
        if q == 0:
            return self._like([], 1, self.exact)
        num, den = q.numerator, q.denominator
        planes = [None if p is None else p * num for p in self._planes]
        return self._like(planes, self._den * den, self.exact)

    def neg(self) -> "TriSeries":
        return self.scale(-1)

    def sub(self, other: "TriSeries") -> "TriSeries":
        return self.add(other.neg())

    def mul(self, other: "TriSeries") -> "TriSeries":
        self._check(other)
        exact = min(self.trunc, self.exact + other.low_degree(), other.exact + self.low_degree())
        den = self._den * other._den
        if self.is_univariate() and other.is_univariate():
            prod = _poly_mul(self._univariate_numerators(), other._univariate_numerators(), exact)
            return TriSeries._from_ints(self.trunc, prod, den, exact)
        small, big = (self, other) if self.nnz() <= other.nnz() else (other, self)
        big_idx = [i for i, p in enumerate(big._planes) if p is not None]
        planes: list[Plane] = [None] * (exact + 1)
        for i1, p in enumerate(small._planes):
            if p is None or i1 > exact:
                continue
            for j, k in zip(*np.nonzero(p != 0)):
                c = p[j, k]
                for i2 in big_idx:
                    if i1 + i2 > exact:
                        break
                    _add_into(planes, i1 + i2, big._planes[i2], int(j), int(k), c)
        return self._like(planes, den, exact)

    def __add__(self, other: "TriSeries") -> "TriSeries":
        return self.add(other)

    def __sub__(self, other: "TriSeries") -> "TriSeries":
        return self.sub(other)

    def __neg__(self) -> "TriSeries":
        return self.neg()

    def __mul__(self, other: Union["TriSeries", Rational]) -> "TriSeries":
        if isinstance(other, TriSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def invert(self) -> "TriSeries":
        """Multiplicative inverse; the ``z**0`` part must be a nonzero constant.

        With integer numerators ``A`` and ``A0`` the constant, the numerators
        ``T`` of the inverse times ``A0**(i+1)`` obey
        ``T_i = A0**i [i=0] - sum_{m>=1} A_m T_{i-m} A0**(m-1)``.
        """
        p0 = self._planes[0] if self._planes else None
        if p0 is None or p0.shape != (1, 1):
            raise NonUnitConstantTerm("z**0 part of the series must be a nonzero constant")
        a0 = p0[0, 0]
        E = self.exact
        nz = [(m, p) for m, p in enumerate(self._planes) if m >= 1 and p is not None]
        T: list[Plane] = [None] * (E + 1)
        T[0] = np.array([[1]], dtype=object)
        for i in range(1, E + 1):
            for m, p in nz:
                if m > i:
                    break
                prev = T[i - m]
                if prev is None:
                    continue
                scale = a0 ** (m - 1)
                for j, k in zip(*np.nonzero(p != 0)):
                    _add_into(T, i, prev, int(j), int(k), -p[j, k] * scale)
            if T[i] is not None:
                T[i] = _trim(T[i])
        # inverse_i = den * T_i / a0**(i+1); bring everything over a0**(E+1)
        sign = -1 if a0 < 0 else 1
        planes = []
        for i, t in enumerate(T):
            if t is None:
                planes.append(None)
            else:
                planes.append(t * (sign * self._den * a0 ** (E - i)))
        return self._like(planes, abs(a0) ** (E + 1), E)

    def __truediv__(self, other: Union["TriSeries", Rational]) -> "TriSeries":
        if isinstance(other, TriSeries):
            return self.mul(other.invert())
        return self.scale(1 / Fraction(other))

    # -- exponent maps ------------------------------------------------------

    def shift(self, i0: int, j0: int = 0, k0: int = 0) -> "TriSeries":
        """Multiply by the monomial ``z**i0 u**j0 r**k0``."""
        exact = min(self.trunc, self.exact + i0)
        planes: list[Plane] = [None] * (exact + 1)
        for i, p in enumerate(self._planes):
            if p is not None and i + i0 <= exact:
                _add_into(planes, i + i0, p, j0, k0)
        return self._like(planes, self._den, exact)

    def divide_exact_monomial(self, i0: int, j0: int = 0, k0: int = 0) -> "TriSeries":
        """Divide by ``z**i0 u**j0 r**k0``; every term must be divisible.

        The reliable z-degree drops by ``i0``.
        """
        planes: list[Plane] = []
        for i, p in enumerate(self._planes):
            if p is None:
                if i >= i0:
                    planes.append(None)
                continue
            if i < i0 or p[:j0, :].any() or p[:, :k0].any():
                raise DivisionRemainder(
                    f"term at z-degree {i} is not divisible by z^{i0} u^{j0} r^{k0}")
            planes.append(p[j0:, k0:])
        return self._like(planes, self._den, self.exact - i0)

    def square_args(self) -> "TriSeries":
        """Substitute ``(z, u, r) -> (z**2, u**2, r**2)``."""
        exact = min(self.trunc, 2 * self.exact + 1)
        planes: list[Plane] = [None] * (exact + 1)
        for i, p in enumerate(self._planes):
            if p is None or 2 * i > exact:
                continue
            q = _plane((2 * p.shape[0] - 1, 2 * p.shape[1] - 1))
            q[::2, ::2] = p
            planes[2 * i] = q
        return self._like(planes, self._den, exact)

    def parity_filter(self, u_parity: str = "any", r_parity: str = "any") -> "TriSeries":
        """Keep the terms whose ``u`` and ``r`` exponents have the given
        parities (``"even"``, ``"odd"`` or ``"any"``)."""
        planes = []
        for p in self._planes:
            if p is None:
                planes.append(None)
                continue
            q = p.copy()
            for axis, parity in ((0, u_parity), (1, r_parity)):
                if parity == "any":
                    continue
                if parity not in ("even", "odd"):
                    raise ValueError(f"parity must be even, odd or any, got {parity!r}")
                drop = 1 if parity == "even" else 0
                if axis == 0:
                    q[drop::2, :] = 0
                else:
                    q[:, drop::2] = 0
            planes.append(q)
        return self._like(planes, self._den, self.exact)

    def sign_substitute(self, u_sign: int = 1, r_sign: int = 1) -> "TriSeries":
        """``a(z, u_sign*u, r_sign*r)`` for signs in ``{1, -1}``."""
        planes = []
        for p in self._planes:
            if p is None:
                planes.append(None)
                continue
            q = p.copy()
            if u_sign == -1:
                q[1::2, :] *= -1
            if r_sign == -1:
                q[:, 1::2] *= -1
            planes.append(q)
        return self._like(planes, self._den, self.exact)

    def substitute(self, u_image: "TriSeries", r_image: "TriSeries") -> "TriSeries":
        """Replace ``u`` and ``r`` by univariate series in ``z``."""
        for img in (u_image, r_image):
            if not isinstance(img, TriSeries) or not img.is_univariate():
                raise TypeError("substitution images must be univariate TriSeries")
            if img.trunc < self.trunc:
                raise TruncationMismatch(
                    f"image truncation {img.trunc} below series truncation {self.trunc}")
        exact = min(self.exact, u_image.exact, r_image.exact)
        u_img = u_image.retruncate(self.trunc).with_exact(exact)
        r_img = r_image.retruncate(self.trunc).with_exact(exact)
        src = self.with_exact(exact)
        if u_img == r_img:
            # both variables map to the same series: only j + k matters
            D = max((p.shape[0] + p.shape[1] - 2 for p in src._planes if p is not None), default=0)
            by_total: list[list[int]] = [[0] * (exact + 1) for _ in range(D + 1)]
            for i, p in enumerate(src._planes):
                if p is None:
                    continue
                for j, k in zip(*np.nonzero(p != 0)):
                    by_total[j + k][i] += p[j, k]
            parts = [TriSeries._from_ints(self.trunc, c, 1, exact) for c in by_total]
            return _horner(parts, u_img).scale(Fraction(1, src._den))
        # general case: Horner in u for each r-power, then Horner in r
        J = max((p.shape[0] for p in src._planes if p is not None), default=1)
        K = max((p.shape[1] for p in src._planes if p is not None), default=1)
        grid = [[[0] * (exact + 1) for _ in range(J)] for _ in range(K)]
        for i, p in enumerate(src._planes):
            if p is None:
                continue
            for j, k in zip(*np.nonzero(p != 0)):
                grid[k][j][i] += p[j, k]
        per_r = []
        for k in range(K):
            parts = [TriSeries._from_ints(self.trunc, c, 1, exact) for c in grid[k]]
            per_r.append(_horner(parts, u_img))
        return _horner(per_r, r_img).scale(Fraction(1, src._den))


def _horner(parts: list[TriSeries], x: TriSeries) -> TriSeries:
    """``sum_d parts[d] * x**d``; even and odd powers are split so that
    ``x**2`` (often integral when ``x`` is not) drives the recursion."""
    if not parts:
        return TriSeries.zero(x.trunc).with_exact(x.exact)
    x2 = x * x
    even = parts[0::2]
    odd = parts[1::2]

    def run(seq: list[TriSeries]) -> TriSeries:
        acc = seq[-1]
        for p in reversed(seq[:-1]):
            acc = acc * x2 + p
        return acc

    result = run(even)
    if odd:
        result = result + run(odd) * x
    return result


# ---------------------------------------------------------------------------
# constructors used by the enumeration


def useq_ge1(c: TriSeries) -> TriSeries:
    """Nonempty sequences counted up to reversal:
    ``1/2 * 1/(1-c) + 1/2 * (1+c)/(1-c(x^2)) - 1``."""
    if c._planes and c._planes[0] is not None:
        raise NonZeroConstantTerm("undirected sequences need a series without z**0 terms")
    one = TriSeries.one(c.trunc)
    directed = (one - c).invert()
    symmetric = (one + c) * (one - c.square_args()).invert()
    return (directed + symmetric).scale(Fraction(1, 2)) - one


def binomial_series(alpha: Rational, w_exponent: int, trunc: int) -> TriSeries:
    """``(1 - z**w_exponent)**alpha`` by the generalized binomial theorem."""
    if w_exponent < 1:
        raise ValueError("w_exponent must be positive")
    alpha = Fraction(alpha)
    coeffs: dict[tuple[int, int, int], Fraction] = {}
    term = Fraction(1)
    m = 0
    while m * w_exponent <= trunc:
        coeffs[(m * w_exponent, 0, 0)] = term
        # next coefficient of (1 - w)^alpha: multiply by -(alpha - m)/(m + 1)
        term = term * -(alpha - m) / (m + 1)
        m += 1
        if term == 0:
            break
    return TriSeries.from_terms(trunc, coeffs)


def geometric(trunc: int) -> TriSeries:
    """``1/(1-z)``."""
    return TriSeries.univariate(trunc, [1] * (trunc + 1))
