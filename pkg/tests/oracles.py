"""Reference computations that share no code with the package.

Exact values come from Gamma-function ratios evaluated as explicit products,
float values from scipy quadrature and special functions.
"""

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
from scipy import integrate, special, stats


def beta_mixed_exact(a, b, s, f):
    """E[theta^s (1-theta)^f] under Beta(a, b) as B(a+s, b+f) / B(a, b)."""
    num = Fraction(1)
    for i in range(s):
        num *= a + i
    for i in range(f):
        num *= b + i
    den = Fraction(1)
    for i in range(s + f):
        den *= a + b + i
    return num / den


def beta_mixed_quad(a, b, s, f):
    dist = stats.beta(a, b)
    val, _ = integrate.quad(lambda t: t**s * (1 - t) ** f * dist.pdf(t), 0, 1, limit=200)
    return val


def beta_mixed_special(a, b, s, f):
    return float(np.exp(special.betaln(a + s, b + f) - special.betaln(a, b)))


def discrete_mixed(atoms, s, f):
    return sum(w * x**s * (1 - x) ** f for x, w in atoms)


def discrete_posterior(atoms, n, s):
    lik = [(x, w * x**s * (1 - x) ** (n - s)) for x, w in atoms]
    z = sum(v for _, v in lik)
    return [(x, v / z) for x, v in lik if v != 0]


def runs_by_integration(moment_fn, K):
    """r_k = E[(1-theta)^k] expanded by the binomial theorem term by term."""
    return [sum(comb(k, j) * (-1) ** j * moment_fn(j) for j in range(k + 1)) for k in range(K + 1)]


def pattern_by_sequential_rule(a, b, n, s, bits):
    """Chain of one-step Beta predictives: P(x_1..x_k) = prod P(x_i | past)."""
    p = Fraction(1)
    for x in bits:
        one = (a + s) / (a + b + n)
        p *= one if x else 1 - one
        n, s = n + 1, s + x
    return p


def all_bits(k):
    return list(product((0, 1), repeat=k))


def bernoulli_kl(p, q):
    return float(special.rel_entr(p, q) + special.rel_entr(1 - p, 1 - q))


def binary_kl_scipy(p_true, p_report):
    return float(stats.entropy([p_true, 1 - p_true], [p_report, 1 - p_report]))


def forward_difference(seq, m, k):
    return sum((-1) ** (m - j) * comb(m, j) * seq[k + j] for j in range(m + 1))
