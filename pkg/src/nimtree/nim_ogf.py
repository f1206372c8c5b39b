"""Generating functions counting NIM trees.

NIM trees are assembled from atoms (short HDV patterns marked by ``u`` for
their variable HDVs and ``r`` for bridge points) strung into molecules.
Molecules are counted up to reflection; those equal to their own reflection
are counted separately through a functional equation.  Substituting for ``u``
and ``r`` turns the molecule series into counts of actual trees:
``u, r -> 1/(1-z)`` lets every variable HDV and bridge grow freely, and the
``1/sqrt(1-z^2)`` images count the growth patterns that keep a symmetric
skeleton symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .errors import (
    IntegralityViolation,
    InvalidRange,
    NonConvergence,
    RootNotBracketed,
)
from .series import TriSeries, binomial_series, geometric, useq_ge1

# internal truncation margin: divisions by z and zr cost reliable degrees
MARGIN = 4

RECURRENCE = (2, 1, -3, 2, -1, -2, 1, 3, -4, -1, 2, -2, 2, 1, -1)
RECURRENCE_START = 16

# z/(1-z) * 1/(1 - A(z, 1/(1-z), 1/(1-z))/z) over a common denominator
ORDERED_NUMERATOR = (0, 1, -2, 1, 0, -1, 1)
# z/(1-z) + (A/z)/(1 - A/z), missing the leading z r of the molecule series
BARE_ORDERED_NUMERATOR = (0, 1, -2, 2, -2, -1, 1)
ORDERED_DENOMINATOR = (1, -3, 3, -2, 0, 2, -1)


def _require(n: int, low: int) -> None:
    if n < low:
        raise InvalidRange(f"truncation must be at least {low}, got {n}")


def atom_ogf(n: int) -> TriSeries:
    """``z^4 r + z^5 u r + sum_{k>=2} z^{4k} u^k r``."""
    _require(n, 4)
    terms = {(4, 0, 1): 1, (5, 1, 1): 1}
    for k in range(2, n // 4 + 1):
        terms[(4 * k, k, 1)] = 1
    return TriSeries.from_terms(n, terms)


def molecule_ogf(n: int, atoms: Optional[TriSeries] = None) -> TriSeries:
    """Molecules up to reflection: ``z r USeq>=1(A/z)``.

    Consecutive atoms share a vertex, hence the ``A/z``; the leading ``z r``
    restores the first vertex and marks the extra bridge point.
    """
    a = atom_ogf(n) if atoms is None else atoms
    return useq_ge1(a.divide_exact_monomial(1)).shift(1, 0, 1)


def symmetric_molecule_ogf(
    n: int, atoms: Optional[TriSeries] = None, molecules: Optional[TriSeries] = None
) -> TriSeries:
    """Reflection-symmetric molecules, solving
    ``S = r A + (2 N*(x^2) - S(x^2)) / (z r) * (1 + A/z)`` by iteration from 0.

    ``x^2`` means squaring all three variables.  Each round fixes at least
    the next doubling of reliable degrees, so the budget is logarithmic.
    """
    a = atom_ogf(n) if atoms is None else atoms
    mol = molecule_ogf(n, a) if molecules is None else molecules
    ra = a.shift(0, 0, 1)
    grow = TriSeries.one(n) + a.divide_exact_monomial(1)
    doubled = mol.square_args().scale(2)
    budget = math.ceil(math.log2(n)) + 2
    s = TriSeries.zero(n)
    for _ in range(budget):
        nxt = ra + (doubled - s.square_args()).divide_exact_monomial(1, 0, 1) * grow
        if s.exact == nxt.exact and s == nxt:
            return s
        s = nxt
    raise NonConvergence(f"symmetric molecule iteration did not settle in {budget} rounds")


@dataclass(frozen=True)
class PipelineResult:
    trunc: int
    a: TriSeries
    n_star: TriSeries
    n_star_s: TriSeries
    ee: TriSeries
    eo: TriSeries
    oe: TriSeries
    oo: TriSeries
    n_s: tuple[int, ...]
    n_a: tuple[int, ...]
    n_total: tuple[int, ...]
    n_total_combined: tuple[int, ...]

    def count(self, n: int) -> int:
        if not 1 <= n <= self.trunc:
            raise InvalidRange(f"n must lie in 1..{self.trunc}, got {n}")
        return self.n_total[n]

    def counts(self) -> list[int]:
        """``N(1) .. N(trunc)``."""
        return list(self.n_total[1:])

    def named_series(self) -> dict[str, TriSeries]:
        t = self.trunc
        named = {
            "A": self.a,
            "N_star": self.n_star,
            "N_star_s": self.n_star_s,
            "N_star_s_ee": self.ee,
            "N_star_s_eo": self.eo,
            "N_star_s_oe": self.oe,
            "N_s": TriSeries.univariate(t, self.n_s),
            "N_a": TriSeries.univariate(t, self.n_a),
            "N": TriSeries.univariate(t, self.n_total),
        }
        return {name: x.retruncate(t) for name, x in named.items()}


def assert_integral_nonnegative(coeffs: Sequence[Fraction], label: str = "series",
                                start: int = 0) -> tuple[int, ...]:
    """Return the coefficients as ints, or raise if any is fractional or negative."""
    out = []
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c.denominator != 1:
            raise IntegralityViolation(f"{label}: coefficient of z^{i} is {c}")
        if i >= start and c < 0:
            raise IntegralityViolation(f"{label}: coefficient of z^{i} is negative ({c})")
        out.append(int(c))
    return tuple(out)


def assemble_nim_ogf(n: int) -> PipelineResult:
    """Run the whole pipeline and return ``N(z)`` reliable through ``z^n``."""
    _require(n, 4)
    return _assemble(n)


@lru_cache(maxsize=4)
def _assemble(n: int) -> PipelineResult:
    t = n + MARGIN
    a = atom_ogf(t)
    mol = molecule_ogf(t, a)
    sym = symmetric_molecule_ogf(t, a, mol)
    ee = sym.parity_filter("even", "even")
    eo = sym.parity_filter("even", "odd")
    oe = sym.parity_filter("odd", "even")
    oo = sym.parity_filter("odd", "odd")
    if not oo.is_zero():
        raise IntegralityViolation("odd/odd parity piece of the symmetric molecules is nonzero")

    s = binomial_series(Fraction(-1, 2), 2, t)
    geo = geometric(t)
    fac = binomial_series(Fraction(1, 2), 2, t) * geo
    paths = geo.shift(1)

    def sub(x: TriSeries, img: TriSeries) -> TriSeries:
        return x.substitute(img, img)

    ee_s, eo_s, oe_s = sub(ee, s), fac * sub(eo, s), fac * sub(oe, s)
    n_s = ee_s + eo_s + oe_s
    asym = mol - sym
    n_a = (
        sub(asym, geo)
        + (sub(ee, geo) - ee_s).scale(Fraction(1, 2))
        + (sub(eo, geo) - eo_s).scale(Fraction(1, 2))
        + (sub(oe, geo) - oe_s).scale(Fraction(1, 2))
    )
    total = paths + n_s + n_a
    combined = paths + sub(mol, geo) - sub(sym, geo).scale(Fraction(1, 2)) + n_s.scale(Fraction(1, 2))

    def finish(x: TriSeries, label: str) -> tuple[int, ...]:
        if x.exact < n:
            raise IntegralityViolation(f"{label}: reliable only to z^{x.exact}, need z^{n}")
        return assert_integral_nonnegative(x.with_exact(n).univariate_coefficients(), label)

    result = PipelineResult(
        trunc=n, a=a, n_star=mol, n_star_s=sym, ee=ee, eo=eo, oe=oe, oo=oo,
        n_s=finish(n_s, "N_s"), n_a=finish(n_a, "N_a"),
        n_total=finish(total, "N"), n_total_combined=finish(combined, "N (combined)"),
    )
    if result.n_total != result.n_total_combined:
        bad = next(i for i, (x, y) in enumerate(zip(result.n_total, result.n_total_combined))
                   if x != y)
        raise IntegralityViolation(f"evaluation routes disagree first at z^{bad}")
    return result


def nim_counts(n: int) -> list[int]:
    """``[N(1), ..., N(n)]``."""
    return assemble_nim_ogf(max(n, 4)).counts()[:n]


# ---------------------------------------------------------------------------
# ordered counts and growth


def ordered_nim_ogf(n: int, bare: bool = False) -> list[int]:
    """Coefficients ``z^0 .. z^n`` counting NIM trees with a left-right
    orientation, so asymmetric trees count twice.

    ``bare=True`` expands the variant without the molecule's leading
    ``z r``; it shares the denominator, hence the growth rate, but not the
    counts.
    """
    _require(n, 1)
    base = BARE_ORDERED_NUMERATOR if bare else ORDERED_NUMERATOR
    num = list(base) + [0] * max(0, n + 1 - len(base))
    out: list[int] = []
    for i in range(n + 1):
        c = num[i] - sum(ORDERED_DENOMINATOR[m] * out[i - m]
                         for m in range(1, min(i, len(ORDERED_DENOMINATOR) - 1) + 1))
        out.append(c)
    return out


def ordered_denominator_at(z: float) -> float:
    return sum(c * z**i for i, c in enumerate(ORDERED_DENOMINATOR))


def growth_constant(tol: float = 1e-12) -> tuple[float, float]:
    """Smallest positive root ``rho`` of the ordered denominator and ``1/rho``."""
    grid = [i / 1000 for i in range(1, 1000)]
    lo = hi = None
    for x0, x1 in zip(grid, grid[1:]):
        if ordered_denominator_at(x0) > 0 >= ordered_denominator_at(x1):
            lo, hi = x0, x1
            break
    if lo is None:
        raise RootNotBracketed("denominator has no sign change in (0, 1)")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if ordered_denominator_at(mid) > 0:
            lo = mid
        else:
            hi = mid
    rho = (lo + hi) / 2
    return rho, 1 / rho


def caterpillar_count(n: int) -> int:
    """Caterpillars on ``n >= 4`` vertices."""
    if n < 4:
        raise InvalidRange(f"caterpillar count needs n >= 4, got {n}")
    return 2 ** (n - 4) + 2 ** ((n - 4) // 2)


# ---------------------------------------------------------------------------
# recurrence


@dataclass(frozen=True)
class RecurrenceReport:
    max_n: int
    checked: int
    holds: bool
    first_failure: Optional[int]
    expected: Optional[int]
    actual: Optional[int]

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "checked": self.checked,
            "holds": self.holds,
            "first_failure": self.first_failure,
            "expected": self.expected,
            "actual": self.actual,
        }


def recurrence_prediction(values: Mapping[int, int], n: int) -> int:
    return sum(c * values[n - m] for m, c in enumerate(RECURRENCE, start=1))


def check_recurrence(max_n: int, values: Optional[Mapping[int, int]] = None) -> RecurrenceReport:
    """Test the 15-term linear recurrence for ``16 <= n <= max_n``.

    ``values`` maps ``n`` to ``N(n)``; by default the pipeline supplies them.
    """
    if max_n < RECURRENCE_START:
        raise InvalidRange(f"max_n must be at least {RECURRENCE_START}")
    if values is None:
        values = dict(enumerate(assemble_nim_ogf(max_n).n_total))
    missing = [m for m in range(1, max_n + 1) if m not in values]
    if missing:
        raise InvalidRange(f"no value supplied for n={missing[0]}")
    checked = 0
    for n in range(RECURRENCE_START, max_n + 1):
        want = recurrence_prediction(values, n)
        checked += 1
        if values[n] != want:
            return RecurrenceReport(max_n, checked, False, n, want, values[n])
    return RecurrenceReport(max_n, checked, True, None, None, None)
