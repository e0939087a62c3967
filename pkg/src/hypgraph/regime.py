"""Finite-n evaluation of the G(n, p) hyperbolicity regimes.

With ``d = p (n - 1)`` and natural logarithms:

* ``j`` is the smallest integer >= 2 with ``d**j / n - 2 ln n >= tau``
  (``tau`` stands in for "tends to infinity");
* ``i`` is the largest even integer >= 2 with ``d**(i-1) <= n ln n / 16``;
* ``q = exp(-d**(i-1) / (2 n))``.

Cases, checked in this order:

* V: ``(1 - p) n**2 < eps_lo``, hyperbolicity 0;
* IV: ``(1 - p) n**2 <= K_hi``; with ``c = (1 - p) n**2 / 2`` the doubled
  value is 0, 1, 2 with probabilities ``e**-c``, ``c e**-c``,
  ``1 - (c + 1) e**-c``;
* I: ``j`` even and ``d**(j-1) <= n ln n / 16``, doubled value ``j``;
* II: ``j`` even and ``n ln n / 16 < d**(j-1) <= (2 + tau2) n ln n``,
  doubled value in ``[j - 2, j]``;
* III: ``j`` odd, doubled value ``j - 1``;
* BOUNDARY otherwise, including when ``margin(j - 1) > -tau`` for ``j >= 3``
  (the diameter itself is undecided).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

DEFAULT_TAU = 10.0
DEFAULT_TAU2 = 0.1
DEFAULT_EPS_LO = 0.01
DEFAULT_K_HI = 100.0
_MAX_J = 256

CASES = ("I", "II", "III", "IV", "V", "BOUNDARY")


def _log_bound(n: int) -> float:
    """``ln(n ln n / 16)``."""
    return math.log(n) + math.log(math.log(n)) - math.log(16)


def margin(n: int, d: float, j: int) -> float:
    """``d**j / n - 2 ln n``, saturating to ``inf`` instead of overflowing."""
    log_term = j * math.log(d) - math.log(n)
    if log_term > 700:
        return math.inf
    return math.exp(log_term) - 2 * math.log(n)


def compute_i(n: int, d: float):
    """``(i, q)``: largest even ``i >= 2`` with ``d**(i-1) <= n ln n / 16``, and ``q``."""
    if d <= 1:
        raise InputError(f"expected degree must exceed 1, got d={d}")
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")
    log_d = math.log(d)
    bound = _log_bound(n)
    i = 2
    while (i + 1) * log_d <= bound:
        i += 2
    q = math.exp(-math.exp((i - 1) * log_d - math.log(2 * n)))
    return i, q


def first_moment_estimate(n: int, d: float) -> float:
    """``d**(2i) / 384 * q**16``, evaluated in log space.

    An asymptotic count of certifying quadruples; diagnostic only.
    """
    i, q = compute_i(n, d)
    log_q = -math.exp((i - 1) * math.log(d) - math.log(2 * n))
    return math.exp(2 * i * math.log(d) - math.log(384) + 16 * log_q)


def dense_probabilities(c: float):
    """``(P[delta=0], P[delta=1/2], P[delta=1])`` for ``p = 1 - 2c/n**2``."""
    if not c > 0:
        raise InputError(f"c must be positive, got {c}")
    p0 = math.exp(-c)
    p_half = c * p0
    if c < 1e-3:
        # 1 - (1 + c) e^-c = sum_{k>=2} (-1)^k (k - 1) c^k / k!
        p1 = c * c * (0.5 - c / 3 + c * c / 8 - c ** 3 / 30)
    else:
        p1 = -math.expm1(-c) - p_half
    return p0, p_half, p1


def asymptotics_suspect(n: int, d: float) -> bool:
    """True when ``d < ln(n)**5 / ln(ln(n))**2``, below the regime where the theory applies."""
    if n < 3:
        return True
    ln = math.log(n)
    return d < ln ** 5 / math.log(ln) ** 2


@dataclass(frozen=True)
class RegimePrediction:
    n: int
    p: float
    d: float
    j: int | None
    i: int | None
    q: float | None
    case: str
    predicted: int | None = None
    interval: tuple | None = None
    distribution: dict | None = None
    margins: tuple = ()
    asymptotics_suspect: bool = False
    c: float | None = None

    def admits(self, delta_doubled: int) -> bool:
        """Whether ``delta_doubled`` is consistent with the prediction."""
        if self.predicted is not None:
            return delta_doubled == self.predicted
        if self.interval is not None:
            return self.interval[0] <= delta_doubled <= self.interval[1]
        if self.distribution is not None:
            return delta_doubled in self.distribution
        return True

    def as_json(self):
        out = {"n": self.n, "p": self.p, "d": self.d, "j": self.j, "i": self.i, "q": self.q, "case": self.case}
        if self.predicted is not None:
            out["predicted_delta_doubled"] = self.predicted
        elif self.interval is not None:
            out["interval"] = list(self.interval)
        elif self.distribution is not None:
            out["distribution"] = {str(k): v for k, v in self.distribution.items()}
        out["margins"] = list(self.margins)
        out["asymptotics_suspect"] = self.asymptotics_suspect
        return out


def predict(
    n: int,
    p: float,
    tau: float = DEFAULT_TAU,
    tau2: float = DEFAULT_TAU2,
    eps_lo: float = DEFAULT_EPS_LO,
    k_hi: float = DEFAULT_K_HI,
) -> RegimePrediction:
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")
    if not 0 < p <= 1:
        raise InputError(f"p must lie in (0, 1], got {p}")
    d = p * (n - 1)
    suspect = asymptotics_suspect(n, d)
    i = q = None
    if d > 1:
        i, q = compute_i(n, d)
    common = dict(n=n, p=p, d=d, i=i, q=q, asymptotics_suspect=suspect)

    co = (1 - p) * n * n
    if co < eps_lo:
        return RegimePrediction(j=None, case="V", predicted=0, **common)
    if co <= k_hi:
        c = co / 2
        p0, ph, p1 = dense_probabilities(c)
        return RegimePrediction(j=None, case="IV", distribution={0: p0, 1: ph, 2: p1}, c=c, **common)

    if d <= 1:
        return RegimePrediction(j=None, case="BOUNDARY", **common)
    margins = []
    j = None
    for k in range(2, _MAX_J + 1):
        mk = margin(n, d, k)
        margins.append(mk)
        if mk >= tau:
            j = k
            break
    margins = tuple(margins)
    if j is None:
        return RegimePrediction(j=None, case="BOUNDARY", margins=margins, **common)
    if j >= 3 and margins[-2] > -tau:
        return RegimePrediction(j=j, case="BOUNDARY", margins=margins, **common)

    log_dj1 = (j - 1) * math.log(d)
    if j % 2 == 1:
        return RegimePrediction(j=j, case="III", predicted=j - 1, margins=margins, **common)
    if log_dj1 <= _log_bound(n):
        return RegimePrediction(j=j, case="I", predicted=j, margins=margins, **common)
    if log_dj1 <= math.log(2 + tau2) + math.log(n) + math.log(math.log(n)):
        return RegimePrediction(j=j, case="II", interval=(j - 2, j), margins=margins, **common)
    return RegimePrediction(j=j, case="BOUNDARY", margins=margins, **common)
