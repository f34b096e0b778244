"""Exact Beta-Bernoulli predictives for half-integer parameters.

Parameters are carried doubled (``alpha2 = 2 * alpha``), so the Jeffreys
prior is ``BetaParams(1, 1)`` and every posterior stays integral.  A rising
factorial of ``x2 / 2`` is then ``prod(x2 + 2 i) / 2**k`` and every ratio of
two rising factorials of equal length is a ratio of plain integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

from .errors import InvalidCounts, PredictiveError

ExactRational = Fraction


def rising_factorial(x, k: int):
    """``x (x+1) ... (x+k-1)``; the empty product (``k = 0``) is one.

    Works for any numeric type; exact when ``x`` is an int or Fraction.
    """
    if k < 0:
        raise PredictiveError("rising factorial needs k >= 0")
    out = x * 0 + 1
    for i in range(k):
        out *= x + i
    return out


def _doubled_rising(x2: int, k: int) -> int:
    # 2**k * (x2/2)_k
    out = 1
    for i in range(k):
        out *= x2 + 2 * i
    return out


@dataclass(frozen=True)
class BetaParams:
    """Beta(alpha2 / 2, beta2 / 2)."""

    alpha2: int
    beta2: int

    def __post_init__(self) -> None:
        for name in ("alpha2", "beta2"):
            v = getattr(self, name)
            if not isinstance(v, Integral) or v < 1:
                raise PredictiveError(f"{name} must be a positive integer, got {v!r}")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha2, 2)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.beta2, 2)

    def updated(self, n: int, s: int) -> "BetaParams":
        _check_counts(n, s)
        return BetaParams(self.alpha2 + 2 * s, self.beta2 + 2 * (n - s))


JEFFREYS = BetaParams(1, 1)
UNIFORM = BetaParams(2, 2)


def _check_counts(n: int, s: int) -> None:
    if not (isinstance(n, Integral) and isinstance(s, Integral)) or not 0 <= s <= n:
        raise InvalidCounts(f"need integers 0 <= s <= n, got n={n!r}, s={s!r}")


def hill_one_step(n: int, s: int) -> Fraction:
    """Jeffreys one-step predictive P(X_{n+1} = 1 | n, s) = (s + 1/2) / (n + 1)."""
    _check_counts(n, s)
    return Fraction(2 * s + 1, 2 * n + 2)


def beta_run_prob(params: BetaParams, n: int, s: int, k: int) -> Fraction:
    """Probability that the next ``k`` observations are all zero."""
    if k < 0:
        raise PredictiveError("horizon must be nonnegative")
    post = params.updated(n, s)
    return Fraction(_doubled_rising(post.beta2, k), _doubled_rising(post.alpha2 + post.beta2, k))


def hill_run_prob(n: int, s: int, k: int) -> Fraction:
    if k < 1:
        raise PredictiveError("horizon must be at least 1")
    return beta_run_prob(JEFFREYS, n, s, k)


def beta_moment(params: BetaParams, n: int, s: int, j: int) -> Fraction:
    """Posterior ``E[theta^j]`` after ``s`` successes in ``n`` trials."""
    if j < 0:
        raise PredictiveError("moment order must be nonnegative")
    post = params.updated(n, s)
    return Fraction(_doubled_rising(post.alpha2, j), _doubled_rising(post.alpha2 + post.beta2, j))


def beta_posterior_variance(params: BetaParams, n: int, s: int) -> Fraction:
    post = params.updated(n, s)
    a, b = post.alpha, post.beta
    return a * b / ((a + b) ** 2 * (a + b + 1))


# -- Table rendering ---------------------------------------------------------

def render_decimal(q: Fraction, places: int) -> str:
    """Exact decimal rendering with round-half-even at ``places`` digits."""
    q = Fraction(q)
    scaled = round(q * 10**places)  # Fraction.__round__ is half-even
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def render_percent(q: Fraction, places: int = 1) -> str:
    return render_decimal(Fraction(q) * 100, places) + "%"


@dataclass(frozen=True)
class ComparisonRow:
    k: int
    plugin: Fraction
    bayes: Fraction
    relative_gap: Fraction

    def rendered(self) -> tuple:
        return (str(self.k), render_decimal(self.plugin, 3), render_decimal(self.bayes, 3),
                render_percent(self.relative_gap, 1))

    def exact_strings(self) -> tuple:
        return (str(self.k), str(self.plugin), str(self.bayes), str(self.relative_gap))


def comparison_table(n: int, s: int, k_max: int, params: BetaParams = JEFFREYS) -> list:
    """Plug-in ``(1 - m_n)^k`` against Bayes run probabilities for k = 2..k_max.

    The relative gap is ``(bayes - plugin) / bayes``.
    """
    _check_counts(n, s)
    if k_max < 2:
        raise PredictiveError("k_max must be at least 2")
    m = beta_moment(params, n, s, 1)
    rows = []
    for k in range(2, k_max + 1):
        plugin = (1 - m) ** k
        bayes = beta_run_prob(params, n, s, k)
        rows.append(ComparisonRow(k, plugin, bayes, (bayes - plugin) / bayes))
    return rows
