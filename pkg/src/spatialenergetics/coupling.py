"""Wigner-3j symbols, Gaunt coefficients and the velocity coupling matrices.

The velocity patterns ``w(Omega) n(Omega)`` of an order-``N`` pattern are of
order ``N+1`` and depend linearly on the pattern coefficients.  The three
matrices mapping ``w_N`` to ``w^x``, ``w^y``, ``w^z`` only depend on ``N`` and
are built once from Gaunt coefficients and the dipole expansions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import OrderOverflowError, ValidationError
from .sh_core import MAX_ORDER, ShVector, degrees_orders, num_coeffs, sh_degree_order

# Degrees above this switch the Racah sum from exact integers to log-factorials.
EXACT_RACAH_MAX_DEGREE = 6

_S = math.sqrt(2.0 * math.pi / 3.0)

# Coefficients of x, y, z = n(Omega) on q = 1, 2, 3 (m = -1, 0, 1).
DIPOLE_COEFFS = {
    "x": np.array([0.0, _S, 0.0, -_S], dtype=complex),
    "y": np.array([0.0, 1j * _S, 0.0, 1j * _S], dtype=complex),
    "z": np.array([0.0, 0.0, math.sqrt(4.0 * math.pi / 3.0), 0.0], dtype=complex),
}
for _c in DIPOLE_COEFFS.values():
    _c.setflags(write=False)


def dipole(axis):
    """Order-1 :class:`ShVector` of the ``axis`` component of ``n(Omega)``."""
    return ShVector(1, DIPOLE_COEFFS[axis])


def _triangle_ok(a, b, c):
    return abs(a - b) <= c <= a + b


def wigner3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol for integer arguments (Racah formula).

    Returns 0.0 whenever a selection rule fails instead of raising.
    """
    if min(j1, j2, j3) < 0:
        return 0.0
    if m1 + m2 + m3 != 0 or not _triangle_ok(j1, j2, j3):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if m1 == m2 == m3 == 0 and (j1 + j2 + j3) % 2:
        return 0.0
    if max(j1, j2, j3) <= EXACT_RACAH_MAX_DEGREE:
        return _racah_exact(j1, j2, j3, m1, m2, m3)
    return _racah_log(j1, j2, j3, m1, m2, m3)


def _racah_terms(j1, j2, j3, m1, m2):
    """Summation range and the six factorial arguments of each Racah term."""
    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    for t in range(t_min, t_max + 1):
        yield t, (t, j3 - j2 + t + m1, j3 - j1 + t - m2, j1 + j2 - j3 - t, j1 - t - m1, j2 - t + m2)


def _racah_exact(j1, j2, j3, m1, m2, m3):
    f = math.factorial
    total = Fraction(0)
    for t, args in _racah_terms(j1, j2, j3, m1, m2):
        denom = 1
        for a in args:
            denom *= f(a)
        total += Fraction((-1) ** t, denom)
    # squared prefactor is an exact rational
    pref2 = Fraction(f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3), f(j1 + j2 + j3 + 1))
    pref2 *= f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3)
    sign = -1 if (j1 - j2 - m3) % 2 else 1
    # sqrt(p/q) * s evaluated as a single rounding where possible
    value = math.sqrt(pref2.numerator) / math.sqrt(pref2.denominator) * float(total)
    return sign * value


def _racah_log(j1, j2, j3, m1, m2, m3):
    lf = lambda k: math.lgamma(k + 1)  # noqa: E731
    log_pref = 0.5 * (
        lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1)
        + lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3)
    )
    total = 0.0
    for t, args in _racah_terms(j1, j2, j3, m1, m2):
        total += (-1) ** t * math.exp(log_pref - sum(lf(a) for a in args))
    sign = -1 if (j1 - j2 - m3) % 2 else 1
    return sign * total


@lru_cache(maxsize=None)
def _gaunt_nm(n1, m1, n2, m2, n, m):
    if m != m1 + m2 or not _triangle_ok(n1, n2, n) or (n1 + n2 + n) % 2:
        return 0.0
    pref = math.sqrt((2 * n + 1) * (2 * n1 + 1) * (2 * n2 + 1) / (4.0 * math.pi))
    sign = -1.0 if m % 2 else 1.0
    return sign * pref * wigner3j(n, n1, n2, 0, 0, 0) * wigner3j(n, n1, n2, -m, m1, m2)


def gaunt(q1, q2, q):
    """Gaunt coefficient ``integral Y_q1 Y_q2 conj(Y_q) dOmega``."""
    n1, m1 = sh_degree_order(q1)
    n2, m2 = sh_degree_order(q2)
    n, m = sh_degree_order(q)
    return _gaunt_nm(n1, m1, n2, m2, n, m)


def product_expand(f, g):
    """Coefficients of the pointwise product of two band-limited functions."""
    order = f.order + g.order
    if order > MAX_ORDER:
        raise OrderOverflowError(f"product order {order} exceeds the supported cap {MAX_ORDER}")
    nf, mf = degrees_orders(f.order)
    ng, mg = degrees_orders(g.order)
    out = np.zeros(num_coeffs(order), dtype=complex)
    for i, fi in enumerate(f.coeffs):
        if fi == 0:
            continue
        for j, gj in enumerate(g.coeffs):
            if gj == 0:
                continue
            m = int(mf[i] + mg[j])
            for n in range(abs(int(nf[i] - ng[j])), int(nf[i] + ng[j]) + 1):
                if abs(m) > n:
                    continue
                out[n * (n + 1) + m] += _gaunt_nm(int(nf[i]), int(mf[i]), int(ng[j]), int(mg[j]), n, m) * fi * gj
    return ShVector(order, out)


@dataclass(frozen=True)
class CouplingMatrices:
    """Matrices ``A_x, A_y, A_z`` of shape ``((N+2)^2, (N+1)^2)``."""

    order: int
    ax: np.ndarray = field(repr=False)
    ay: np.ndarray = field(repr=False)
    az: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (num_coeffs(self.order + 1), num_coeffs(self.order))
        for name in ("ax", "ay", "az"):
            a = np.array(getattr(self, name), dtype=complex)
            if a.shape != shape:
                raise ValueError(f"{name} has shape {a.shape}, expected {shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def apply(self, w):
        """Velocity-pattern coefficients ``(w^x, w^y, w^z)`` of ``w``."""
        if w.order != self.order:
            raise ValueError(f"pattern order {w.order} does not match matrices of order {self.order}")
        return tuple(ShVector(self.order + 1, a @ w.coeffs) for a in (self.ax, self.ay, self.az))

    def to_json(self):
        """Serialize as ``{order, ax, ay, az}`` with row-major ``[re, im]`` pairs."""
        def pairs(a):
            return [[[float(z.real), float(z.imag)] for z in row] for row in a]

        return json.dumps({"order": self.order, "ax": pairs(self.ax), "ay": pairs(self.ay), "az": pairs(self.az)})

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
            order = data["order"]
            mats = {}
            for name in ("ax", "ay", "az"):
                arr = np.asarray(data[name], dtype=float)
                mats[name] = arr[..., 0] + 1j * arr[..., 1]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValidationError(f"malformed coupling-matrix file: {exc}") from exc
        if not isinstance(order, int) or isinstance(order, bool):
            raise ValidationError("'order' must be an integer")
        if set(data) != {"order", "ax", "ay", "az"}:
            raise ValidationError(f"unexpected fields {sorted(set(data) - {'order', 'ax', 'ay', 'az'})}")
        try:
            return cls(order, **mats)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc


@lru_cache(maxsize=None)
def velocity_coupling_matrices(order):
    """Build the coupling matrices for patterns of order ``order``.

    Entry ``(i, j)`` couples pattern coefficient ``q' = j`` with the dipole
    coefficients ``q'' = 1, 2, 3`` into output coefficient ``q = i``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > MAX_ORDER - 1:
        raise OrderOverflowError(
            f"pattern order {order} exceeds the supported cap {MAX_ORDER - 1} (velocity order {order + 1})"
        )
    rows, cols = num_coeffs(order + 1), num_coeffs(order)
    G = np.zeros((3, rows, cols))
    for i in range(rows):
        for j in range(cols):
            for k in range(3):
                G[k, i, j] = gaunt(j, k + 1, i)
    mats = {}
    for axis in ("x", "y", "z"):
        d = DIPOLE_COEFFS[axis]
        mats["a" + axis] = d[1] * G[0] + d[2] * G[1] + d[3] * G[2]
    return CouplingMatrices(order, **mats)
