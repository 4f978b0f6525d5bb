"""Scalar special-function kernel used by the closed-form sensing formulas.

Everything here is pure and stateless.  The incomplete-gamma pair is
implemented with the classic regime split (power series below ``x = s + 1``,
Lentz continued fraction above) so that both the upper and lower regularized
functions are computed directly in the regime where they are small; the
complement is then formed by subtraction, never by cancellation of two
near-equal quantities.

Modified Bessel K of integer order is evaluated through the exponentially
scaled seeds ``k0e``/``k1e`` and the (stable) upward three-term recurrence,
carrying an explicit log-scale so that huge orders at small argument neither
overflow nor underflow.  ``ln_bessel_k_int`` exposes the log-domain value
needed by the averaged-detection closed form at large sample counts.
"""

from __future__ import annotations

import math

from scipy import special as _sp

# Euler-Mascheroni constant, used by the large-Q harmonic approximation.
EULER_GAMMA = 0.5772156649015329

_SERIES_MAX_TERMS = 500_000
_CF_MAX_TERMS = 500_000
_HYP_MAX_TERMS = 10_000
_INV_MAX_ITER = 200


class ConvergenceError(RuntimeError):
    """An iterative numeric routine exhausted its iteration budget."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _finite(x: float, name: str) -> float:
    x = float(x)
    _require(math.isfinite(x), f"{name} must be finite, got {x!r}")
    return x


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    x = _finite(x, "x")
    _require(x > 0.0, f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _lower_series(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) by power series (x < s + 1)."""
    term = 1.0 / s
    total = term
    k = 0.0
    for _ in range(_SERIES_MAX_TERMS):
        k += 1.0
        term *= x / (s + k)
        total += term
        if abs(term) < abs(total) * 1e-17:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ConvergenceError(f"incomplete gamma series stalled at s={s}, x={x}")


def _upper_cf(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) by continued fraction (x >= s + 1)."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_TERMS):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ConvergenceError(f"incomplete gamma continued fraction stalled at s={s}, x={x}")


def reg_upper_gamma(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s)."""
    s = _finite(s, "s")
    x = _finite(x, "x")
    _require(s > 0.0, f"reg_upper_gamma requires s > 0, got {s}")
    _require(x >= 0.0, f"reg_upper_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _lower_series(s, x)
    return _upper_cf(s, x)


def reg_lower_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) = 1 - Q(s, x)."""
    s = _finite(s, "s")
    x = _finite(x, "x")
    _require(s > 0.0, f"reg_lower_gamma requires s > 0, got {s}")
    _require(x >= 0.0, f"reg_lower_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return _lower_series(s, x)
    return 1.0 - _upper_cf(s, x)


def inv_reg_upper_gamma(s: float, p: float) -> float:
    """Solve Q(s, x) = p for x, with p in (0, 1).

    Q(s, .) is strictly decreasing, so the root is unique.  A geometric
    bracket search is followed by bisection and a short secant polish;
    the returned x satisfies |Q(s, x) - p| <= 1e-10.
    """
    s = _finite(s, "s")
    p = _finite(p, "p")
    _require(s > 0.0, f"inv_reg_upper_gamma requires s > 0, got {s}")
    _require(0.0 < p < 1.0, f"inv_reg_upper_gamma requires 0 < p < 1, got {p}")

    # Bracket: Q(s, lo) > p > Q(s, hi).
    lo = 0.0
    hi = max(s, 1.0)
    for _ in range(_INV_MAX_ITER):
        if reg_upper_gamma(s, hi) < p:
            break
        lo = hi
        hi *= 2.0
    else:
        raise ConvergenceError(f"could not bracket inverse gamma at s={s}, p={p}")

    # Tolerance must be relative in p: for deep-tail targets an absolute
    # residual as large as p itself would still satisfy a fixed cutoff.
    tol = 1e-13 * min(p, 1.0 - p)
    x = 0.5 * (lo + hi)
    for _ in range(_INV_MAX_ITER):
        q = reg_upper_gamma(s, x)
        if abs(q - p) <= tol or (hi - lo) <= 1e-15 * hi:
            break
        if q > p:
            lo = x
        else:
            hi = x
        x = 0.5 * (lo + hi)

    # Secant polish from the last two bracket midpoints.
    x0, x1 = lo, hi
    q0, q1 = reg_upper_gamma(s, x0) - p, reg_upper_gamma(s, x1) - p
    for _ in range(4):
        if q1 == q0:
            break
        x2 = x1 - q1 * (x1 - x0) / (q1 - q0)
        if not (lo <= x2 <= hi):
            break
        x0, q0 = x1, q1
        x1, q1 = x2, reg_upper_gamma(s, x2) - p
        if abs(q1) <= tol:
            break
    if abs(reg_upper_gamma(s, x1) - p) < abs(reg_upper_gamma(s, x) - p):
        x = x1
    return x


def ln_bessel_k_int(order: int, x: float) -> float:
    """log K_M(x) for integer order M >= 0 and x > 0.

    Seeds the stable upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m with the
    exponentially scaled k0e/k1e and renormalizes on the fly, so the result is
    finite even where K_M itself overflows (large M, small x).
    """
    _require(isinstance(order, int) or float(order).is_integer(),
             f"order must be an integer, got {order!r}")
    order = int(order)
    _require(order >= 0, f"order must be >= 0, got {order}")
    x = _finite(x, "x")
    _require(x > 0.0, f"ln_bessel_k_int requires x > 0, got {x}")

    k_prev = float(_sp.k0e(x))  # e^x K_0(x)
    k_curr = float(_sp.k1e(x))  # e^x K_1(x)
    if order == 0:
        return math.log(k_prev) - x
    log_scale = 0.0
    for m in range(1, order):
        k_next = k_prev + (2.0 * m / x) * k_curr
        k_prev, k_curr = k_curr, k_next
        if k_curr > 1e250:
            k_prev /= 1e250
            k_curr /= 1e250
            log_scale += 250.0 * math.log(10.0)
    return math.log(k_curr) + log_scale - x


def bessel_k_int(order: int, x: float) -> float:
    """Modified Bessel function of the second kind K_M(x), integer M >= 1.

    Overflows to ``inf`` where the true value exceeds float range (large
    order at small argument); use :func:`ln_bessel_k_int` there.
    """
    _require(int(order) >= 1, f"bessel_k_int requires order >= 1, got {order}")
    ln_k = ln_bessel_k_int(int(order), x)
    if ln_k > 709.0:
        return math.inf
    return math.exp(ln_k)


def hypergeom_1f2(a: float, b1: float, b2: float, z: float) -> float:
    """Generalized hypergeometric 1F2(a; b1, b2; z) by direct series.

    The series terminates when a term falls below 1e-14 of the running sum;
    more than 10^4 terms raises ConvergenceError.  Nonpositive-integer
    denominator parameters are poles and are rejected.
    """
    a = _finite(a, "a")
    z = _finite(z, "z")
    for name, b in (("b1", b1), ("b2", b2)):
        b = _finite(b, name)
        _require(not (b <= 0.0 and abs(b - round(b)) < 1e-12),
                 f"{name}={b} is a nonpositive integer: pole of 1F2")
    if z == 0.0:
        return 1.0
    term = 1.0
    total = 1.0
    for k in range(_HYP_MAX_TERMS):
        term *= (a + k) * z / ((b1 + k) * (b2 + k) * (k + 1.0))
        total += term
        if abs(term) < 1e-14 * abs(total):
            return total
    raise ConvergenceError(
        f"1F2 series did not converge within {_HYP_MAX_TERMS} terms at z={z}")


def harmonic(q: int) -> float:
    """Q-th harmonic number, summed in increasing index order.

    Sequential summation makes harmonic(Q) - harmonic(Q-1) == 1/Q exact
    in floating point, which downstream identities rely on.
    """
    _require(int(q) == q and q >= 1, f"harmonic requires integer Q >= 1, got {q!r}")
    total = 0.0
    for k in range(1, int(q) + 1):
        total += 1.0 / k
    return total


def log_binom(n: int, k: int) -> float:
    """ln C(n, k) via ln_gamma, for integers 0 <= k <= n."""
    _require(int(n) == n and n >= 0, f"log_binom requires integer N >= 0, got {n!r}")
    _require(int(k) == k and k >= 0, f"log_binom requires integer k >= 0, got {k!r}")
    _require(k <= n, f"log_binom requires k <= N, got k={k}, N={n}")
    n, k = int(n), int(k)
    return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
