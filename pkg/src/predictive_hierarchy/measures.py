"""Mixing measures on [0, 1] and exchangeable posterior updating.

Three families are supported: :class:`PointMass`, :class:`Discrete` and
:class:`Beta`.  Each measure is built in one of two arithmetic modes:

* exact -- every parameter is a :class:`fractions.Fraction`;
* float -- every parameter is a Python ``float``.

The mode is decided once, at construction.  Passing ``exact=None`` (the
default) infers it from the inputs: ints, Fractions, Decimals and numeric
strings give an exact measure, any ``float`` gives a float measure.  Passing
``exact=True`` with float inputs converts them to their exact binary value;
``exact=False`` forces floats.  Arithmetic never switches mode behind the
caller's back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Union

import numpy as np

from .beta_exact import rising_factorial
from .errors import DegeneratePosterior, InvalidBracket, InvalidCounts, PredictiveError

Number = Union[Fraction, float]

WEIGHT_TOL = 1e-12


def _is_exact_input(x: Any) -> bool:
    return isinstance(x, (Rational, Decimal, str)) and not isinstance(x, bool)


def _resolve_mode(exact: bool | None, *values: Any) -> bool:
    if exact is not None:
        return bool(exact)
    return all(_is_exact_input(v) for v in values)


def coerce(x: Any, exact: bool) -> Number:
    """Convert ``x`` to the carrier type of the requested mode."""
    if exact:
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)


def _in_unit(x: Number) -> bool:
    return 0 <= x <= 1


@dataclass(frozen=True)
class PointMass:
    """Dirac measure at ``location``; the posterior of the plug-in rule."""

    location: Number
    exact: bool | None = None

    def __post_init__(self) -> None:
        exact = _resolve_mode(self.exact, self.location)
        loc = coerce(self.location, exact)
        if not _in_unit(loc):
            raise PredictiveError(f"point mass location {loc} outside [0, 1]")
        object.__setattr__(self, "location", loc)
        object.__setattr__(self, "exact", exact)

    def mixed_moment(self, s: int, f: int) -> Number:
        x = self.location
        return x**s * (1 - x) ** f

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(self.location))


@dataclass(frozen=True)
class Beta:
    alpha: Number
    beta: Number
    exact: bool | None = None

    def __post_init__(self) -> None:
        exact = _resolve_mode(self.exact, self.alpha, self.beta)
        a, b = coerce(self.alpha, exact), coerce(self.beta, exact)
        if not (a > 0 and b > 0):
            raise PredictiveError(f"Beta parameters must be positive, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "exact", exact)

    def mixed_moment(self, s: int, f: int) -> Number:
        # E[theta^s (1-theta)^f] = (a)_s (b)_f / (a+b)_{s+f}
        a, b = self.alpha, self.beta
        return rising_factorial(a, s) * rising_factorial(b, f) / rising_factorial(a + b, s + f)

    def log_density(self, theta: np.ndarray) -> np.ndarray:
        a, b = float(self.alpha), float(self.beta)
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
        # skipping a unit exponent keeps 0 * log 0 out of the endpoints
        with np.errstate(divide="ignore"):
            if a != 1:
                out = out + (a - 1) * np.log(theta)
            if b != 1:
                out = out + (b - 1) * np.log1p(-theta)
        return out

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.beta(float(self.alpha), float(self.beta), size=size)


@dataclass(frozen=True)
class Discrete:
    """Finitely many atoms ``(location, weight)``.

    Atoms are stored sorted by location; exact duplicates are merged.  Near
    duplicates (float mode) are kept as separate atoms.  With
    ``normalize=True`` the weights are rescaled to sum to one, otherwise they
    must already do so (exactly in exact mode, within 1e-12 in float mode).
    """

    atoms: tuple
    exact: bool | None = None
    normalize: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        pairs = [tuple(p) for p in self.atoms]
        if not pairs:
            raise PredictiveError("discrete measure needs at least one atom")
        if any(len(p) != 2 for p in pairs):
            raise PredictiveError("atoms must be (location, weight) pairs")
        exact = _resolve_mode(self.exact, *(v for p in pairs for v in p))
        merged: dict = {}
        for loc, w in pairs:
            loc, w = coerce(loc, exact), coerce(w, exact)
            if not _in_unit(loc):
                raise PredictiveError(f"atom location {loc} outside [0, 1]")
            if not w > 0:
                raise PredictiveError(f"atom weight must be positive, got {w}")
            merged[loc] = merged.get(loc, 0) + w
        total = sum(merged.values())
        if self.normalize:
            merged = {loc: w / total for loc, w in merged.items()}
        elif exact and total != 1:
            raise PredictiveError(f"weights sum to {total}, not exactly 1")
        elif not exact and abs(total - 1) > WEIGHT_TOL:
            raise PredictiveError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))
        object.__setattr__(self, "exact", exact)

    @property
    def locations(self) -> tuple:
        return tuple(loc for loc, _ in self.atoms)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self.atoms)

    def mixed_moment(self, s: int, f: int) -> Number:
        return sum(w * x**s * (1 - x) ** f for x, w in self.atoms)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        locs = np.array([float(x) for x in self.locations])
        p = np.array([float(w) for w in self.weights])
        return rng.choice(locs, size=size, p=p / p.sum())


MixingMeasure = Union[PointMass, Discrete, Beta]


@dataclass(frozen=True)
class PosteriorState:
    """Prior plus the sufficient pair (n, S_n)."""

    prior: MixingMeasure
    n: int
    s: int

    def __post_init__(self) -> None:
        if not (0 <= self.s <= self.n):
            raise InvalidCounts(f"need 0 <= s <= n, got n={self.n}, s={self.s}")

    @classmethod
    def from_data(cls, prior: MixingMeasure, data: Iterable[int]) -> "PosteriorState":
        bits = [int(x) for x in data]
        if any(b not in (0, 1) for b in bits):
            raise PredictiveError("observations must be 0 or 1")
        return cls(prior, len(bits), sum(bits))


def moment(measure: MixingMeasure, j: int) -> Number:
    """j-th raw moment of ``measure``; ``j = 0`` gives exactly one."""
    if j < 0:
        raise PredictiveError("moment order must be nonnegative")
    if j == 0:
        return Fraction(1) if measure.exact else 1.0
    return measure.mixed_moment(j, 0)


def moments(measure: MixingMeasure, K: int) -> list:
    return [moment(measure, j) for j in range(K + 1)]


def mean_variance(measure: MixingMeasure) -> tuple:
    if isinstance(measure, PointMass):
        return measure.location, measure.location * 0
    if isinstance(measure, Beta):
        a, b = measure.alpha, measure.beta
        return a / (a + b), a * b / ((a + b) ** 2 * (a + b + 1))
    m = measure.mixed_moment(1, 0)
    return m, sum(w * (x - m) ** 2 for x, w in measure.atoms)


def posterior(state: PosteriorState) -> MixingMeasure:
    prior, n, s = state.prior, state.n, state.s
    if isinstance(prior, PointMass):
        return prior
    if isinstance(prior, Beta):
        return Beta(prior.alpha + s, prior.beta + (n - s), exact=prior.exact)
    return _discrete_posterior(prior, n, s)


def _discrete_posterior(prior: Discrete, n: int, s: int) -> Discrete:
    f = n - s
    live = [(x, w) for x, w in prior.atoms if not ((x == 0 and s > 0) or (x == 1 and f > 0))]
    if not live:
        raise DegeneratePosterior(f"every atom has zero likelihood for n={n}, s={s}")
    if prior.exact:
        unnorm = [(x, w * x**s * (1 - x) ** f) for x, w in live]
        total = sum(w for _, w in unnorm)
        return Discrete(tuple((x, w / total) for x, w in unnorm), exact=True)
    # log-space keeps large n from underflowing every weight to zero
    logs = []
    for x, w in live:
        lw = math.log(w)
        if s:
            lw += s * math.log(x)
        if f:
            lw += f * math.log1p(-x)
        logs.append(lw)
    top = max(logs)
    raw = [math.exp(lw - top) for lw in logs]
    total = math.fsum(raw)
    atoms = tuple((x, r / total) for (x, _), r in zip(live, raw) if r > 0)
    return Discrete(atoms, exact=False, normalize=True)


def two_point_with_mean(a: Any, b: Any, m: Any, *, exact: bool | None = None) -> Discrete:
    """Measure ``lam * delta_a + (1 - lam) * delta_b`` with mean ``m``."""
    exact = _resolve_mode(exact, a, b, m)
    a, b, m = coerce(a, exact), coerce(b, exact), coerce(m, exact)
    if not (0 <= a < m < b <= 1):
        raise InvalidBracket(f"need 0 <= a < m < b <= 1, got a={a}, m={m}, b={b}")
    lam = (b - m) / (b - a)
    return Discrete(((a, lam), (b, 1 - lam)), exact=exact, normalize=not exact)


# -- serialization ---------------------------------------------------------

def _fmt(x: Number) -> str:
    return str(x) if isinstance(x, Fraction) else repr(float(x))


def to_json(measure: MixingMeasure) -> dict:
    if isinstance(measure, PointMass):
        return {"type": "point", "exact": measure.exact, "location": _fmt(measure.location)}
    if isinstance(measure, Beta):
        return {"type": "beta", "exact": measure.exact,
                "alpha": _fmt(measure.alpha), "beta": _fmt(measure.beta)}
    return {"type": "discrete", "exact": measure.exact,
            "atoms": [[_fmt(x), _fmt(w)] for x, w in measure.atoms]}


def from_json(obj: dict) -> MixingMeasure:
    kind = obj.get("type")
    exact = obj.get("exact", True)
    if kind == "point":
        return PointMass(obj["location"], exact=exact)
    if kind == "beta":
        return Beta(obj["alpha"], obj["beta"], exact=exact)
    if kind == "discrete":
        return Discrete(tuple(tuple(p) for p in obj["atoms"]), exact=exact)
    raise PredictiveError(f"unknown measure type {kind!r}")


def parse_measure(text: str, *, exact: bool = True) -> MixingMeasure:
    """Parse ``beta:a,b``, ``point:m``, ``discrete:x1,w1;x2,w2`` or a named prior.

    Named priors: ``jeffreys`` (Beta(1/2, 1/2)) and ``uniform`` (Beta(1, 1)).
    Numbers are read as decimal or ``p/q`` strings, so the result is exact
    unless ``exact=False``.
    """
    text = text.strip()
    named = {"jeffreys": ("1/2", "1/2"), "uniform": ("1", "1")}
    if text.lower() in named:
        return Beta(*named[text.lower()], exact=exact)
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "beta":
            a, b = body.split(",")
            return Beta(a, b, exact=exact)
        if kind == "point":
            return PointMass(body, exact=exact)
        if kind == "discrete":
            atoms = tuple(tuple(part.split(",")) for part in body.split(";") if part.strip())
            return Discrete(atoms, exact=exact)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, PredictiveError):
            raise
        raise PredictiveError(f"cannot parse measure {text!r}: {exc}") from None
    raise PredictiveError(f"unknown measure spec {text!r}")
