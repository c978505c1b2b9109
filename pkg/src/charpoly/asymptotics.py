"""Large-N evaluators for every asymptotic expansion: bulk and edge single
charge, two-charge bulk collision, multi-charge edge (error-function kernel /
non-intersecting paths) and bulk (HCIZ), truncated-CUE edge, exterior region,
and the three lemniscate regimes.

Every evaluator returns the full log of the right-hand side including the
constant term; the o(1) factors are dropped, and agreement with exact routes
is assessed via ratios along growing N.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import confluent as _confluent
from . import gap as _gap
from . import painleve as _painleve
from .dualities import (
    hciz_ratio,
    lemniscate_gamma_exponents,
    log_c_lemniscate,
)
from .specfun import erfc_complex, log_barnes_g

__all__ = [
    "EdgeVectors",
    "bulk_interior",
    "gue_largest_f",
    "ginibre_edge",
    "bulk_two_charge",
    "noninteger_bulk",
    "edge_f_det",
    "edge_f_km",
    "edge_multi",
    "bulk_multi",
    "tcue_edge",
    "ginibre_exterior",
    "lemniscate_asym",
    "lemniscate_kappa",
]


@dataclass(frozen=True)
class EdgeVectors:
    """Microscopic offset vectors (units of 1/sqrt(N)); degeneracies allowed."""

    u: tuple
    v: tuple

    def __post_init__(self):
        u = tuple(complex(x) for x in self.u)
        v = tuple(complex(x) for x in self.v)
        if len(u) != len(v) or not u:
            raise ValueError("u and v must have equal positive length")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def k(self) -> int:
        return len(self.u)


def bulk_interior(n: int, gamma: float, z: complex) -> float:
    """ln of the interior expansion:
    N gamma (|z|^2-1)/2 + (gamma^2/8) ln N + (gamma/4) ln 2pi - ln G(1+gamma/2)."""
    az2 = abs(complex(z)) ** 2
    if gamma == 0.0:
        return 0.0
    return float(
        0.5 * n * gamma * (az2 - 1.0)
        + 0.125 * gamma * gamma * math.log(n)
        + 0.25 * gamma * math.log(2.0 * math.pi)
        - log_barnes_g(1.0 + 0.5 * gamma)
    )


def gue_largest_f(k: float, x: float) -> float:
    """F_k(x): the determinant route for integer k, the Painleve IV
    connection solve for real k."""
    if k == 0.0:
        return 1.0
    if abs(k - round(k)) < 1e-12 and k >= 1:
        return _gap.gap_cdf(_gap.GUE(int(round(k))), x)
    return _piv_f_cached(float(k), float(x))


@lru_cache(maxsize=512)
def _piv_f_cached(k: float, x: float) -> float:
    return _painleve.piv_f(k, x)


def ginibre_edge(n: int, k: float, z: complex) -> float:
    """ln of the boundary expansion (uniform to |z| = 1 + L/sqrt(N)):
    Nk(|z|^2-1) + (k^2/2) ln N + (k/2) ln 2pi - ln G(1+k) + ln F_k(sqrt(N)(1-|z|^2))."""
    az2 = abs(complex(z)) ** 2
    f = gue_largest_f(k, math.sqrt(n) * (1.0 - az2))
    return float(
        n * k * (az2 - 1.0)
        + 0.5 * k * k * math.log(n)
        + 0.5 * k * math.log(2.0 * math.pi)
        - log_barnes_g(1.0 + k)
        + math.log(f)
    )


def bulk_two_charge(n, k1, k2, z, u1, u2) -> float:
    """ln of the two-charge bulk collision expansion at z_i = z + u_i/sqrt(N);
    k1 may be real (>= k2), k2 is an integer determinant size."""
    if k2 > k1:
        k1, k2 = k2, k1
        u1, u2 = u2, u1
    if k2 == 0:
        if k1 == 0:
            return 0.0
        return bulk_interior(n, 2.0 * k1, complex(z) + complex(u1) / math.sqrt(n))
    k2i = int(round(k2))
    if abs(k2 - k2i) > 1e-12 or k2i < 1:
        raise ValueError("the smaller exponent k2 must be a nonnegative integer")
    z = complex(z)
    rn = math.sqrt(n)
    z1 = z + complex(u1) / rn
    z2 = z + complex(u2) / rn
    sep2 = abs(complex(u2) - complex(u1)) ** 2
    f = _gap.gap_cdf(_gap.LUE(k2i, float(k1 - k2i)), sep2)
    return float(
        k1 * n * (abs(z1) ** 2 - 1.0)
        + k2 * n * (abs(z2) ** 2 - 1.0)
        + 0.5 * (k1 * k1 + k2 * k2) * math.log(n)
        - 2.0 * k1 * k2 * math.log(abs(z2 - z1))
        + 0.5 * (k1 + k2) * math.log(2.0 * math.pi)
        - log_barnes_g(1.0 + k1)
        - log_barnes_g(1.0 + k2)
        + math.log(f)
    )


def noninteger_bulk(n: int, gamma: float, k2: int, u2: float) -> float:
    """ln of the z = 0, u1 = 0 collision expansion with real first exponent:
    valid under gamma >= k2, u2 > 0 (the induced-Ginibre route)."""
    if gamma < k2:
        raise ValueError("hypothesis gamma >= k2 violated")
    if u2 <= 0:
        raise ValueError("u2 must be positive")
    f = _gap.gap_cdf(_gap.LUE(k2, float(gamma - k2)), u2 * u2)
    return float(
        u2 * u2 * k2
        - (gamma + k2) * n
        + 0.5 * (gamma * gamma + k2 * k2) * math.log(n)
        - 2.0 * k2 * gamma * (math.log(u2) - 0.5 * math.log(n))
        + 0.5 * (gamma + k2) * math.log(2.0 * math.pi)
        - log_barnes_g(1.0 + k2)
        - log_barnes_g(1.0 + gamma)
        + math.log(f)
    )


# ---------------------------------------------------------------------------
# multi-charge edge: error-function kernel and Karlin-McGregor quadrature
# ---------------------------------------------------------------------------

def _poly_diff(p: dict, var: int) -> dict:
    out = {}
    for (i, j), c in p.items():
        e = (i, j)[var]
        if e:
            key = (i - 1, j) if var == 0 else (i, j - 1)
            out[key] = out.get(key, 0.0) + c * e
    return out


def _poly_shift_mul(p: dict, du: int, dv: int, c: float) -> dict:
    return {(i + du, j + dv): cc * c for (i, j), cc in p.items()}


def _poly_add(*ps) -> dict:
    out = {}
    for p in ps:
        for key, c in p.items():
            out[key] = out.get(key, 0.0) + c
    return out


@lru_cache(maxsize=256)
def _kerf_deriv_poly(p: int, q: int):
    """(P, Q) polynomial pair with d_u^p d_v^q K_erf = (P G E + Q G H),
    where G = e^{-(u-v)^2/2}, E = erfc(-(u+v)/sqrt2), H = sqrt(2/pi) e^{-(u+v)^2/2}.

    Closed derivative algebra: d_u(GE) = -(u-v) GE + GH, d_u(GH) = -2u GH,
    d_v(GE) = (u-v) GE + GH, d_v(GH) = -2v GH.
    """
    if p == 0 and q == 0:
        return {(0, 0): 1.0}, {}
    if q > 0:
        P, Q = _kerf_deriv_poly(p, q - 1)
        newP = _poly_add(
            _poly_diff(P, 1),
            _poly_shift_mul(P, 1, 0, 1.0),
            _poly_shift_mul(P, 0, 1, -1.0),
        )
        newQ = _poly_add(P, _poly_diff(Q, 1), _poly_shift_mul(Q, 0, 1, -2.0))
        return newP, newQ
    P, Q = _kerf_deriv_poly(p - 1, 0)
    newP = _poly_add(
        _poly_diff(P, 0),
        _poly_shift_mul(P, 1, 0, -1.0),
        _poly_shift_mul(P, 0, 1, 1.0),
    )
    newQ = _poly_add(P, _poly_diff(Q, 0), _poly_shift_mul(Q, 1, 0, -2.0))
    return newP, newQ


def _poly_eval(p: dict, u: complex, v: complex) -> complex:
    return sum(c * u**i * v**j for (i, j), c in p.items())


_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def _kerf_deriv(p: int, q: int, u: complex, v: complex) -> complex:
    P, Q = _kerf_deriv_poly(p, q)
    g = cmath.exp(-0.5 * (u - v) ** 2)
    e = erfc_complex(-(u + v) / math.sqrt(2.0))
    h = _SQRT_2_OVER_PI * cmath.exp(-0.5 * (u + v) ** 2)
    fac = math.factorial(p) * math.factorial(q)
    return (_poly_eval(P, u, v) * g * e + _poly_eval(Q, u, v) * g * h) / fac


def edge_f_det(u, v) -> complex:
    """F^edge_k via the error-function-kernel determinant:
    k!/(2^k (2pi)^{k/2}) det{K_erf(u_i, conj(v_j))}/(Delta(u) Delta(conj(v))),
    with confluent divided differences for coincident entries."""
    u = [complex(x) for x in u]
    vb = [complex(x).conjugate() for x in v]
    k = len(u)
    ratio = _confluent.det_ratio(u, vb, _kerf_deriv)
    return ratio * math.factorial(k) / (2.0**k * (2.0 * math.pi) ** (k / 2.0))


def _bm_kernel(a, s):
    # p_{1/2}(a, s) = e^{-(a-s)^2} / sqrt(pi)
    return np.exp(-((a - s) ** 2)) / math.sqrt(math.pi)


def _det_stack(rows):
    """Determinant tensors over tensor-product grid axes.

    rows: list of k arrays, rows[i][a] = f_i(s_a).  Returns the k-axis tensor
    D[a_1..a_k] = det{f_i(s_{a_j})} assembled from explicit permutation sums.
    """
    k = len(rows)
    n = rows[0].size
    if k == 1:
        return rows[0]
    if k == 2:
        return np.einsum("a,b->ab", rows[0], rows[1]) - np.einsum(
            "b,a->ab", rows[0], rows[1]
        )
    if k == 3:
        perms = [
            ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
            ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1),
        ]
        out = np.zeros((n, n, n), dtype=complex)
        axes = "abc"
        for perm, sgn in perms:
            spec = ",".join(axes[j] for j in perm) + "->abc"
            out += sgn * np.einsum(spec, rows[0], rows[1], rows[2])
        return out
    raise ValueError("Karlin-McGregor quadrature supports k <= 3")


def edge_f_km(u, v, n_nodes: int = 160) -> complex:
    """F^edge_k via the Karlin-McGregor route: adaptive-resolution tensor
    quadrature of Z_{1/2}(u, conj(v), R_+) divided by the Vandermondes.
    Requires pairwise-distinct u and distinct v (k <= 3)."""
    u = [complex(x) for x in u]
    vb = [complex(x).conjugate() for x in v]
    k = len(u)
    if k > 3:
        raise ValueError("Karlin-McGregor route supports k <= 3")
    reach = max([abs(x.real) for x in u + vb], default=0.0)
    L = reach + 7.0
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    s = 0.5 * L * (x + 1.0)
    ws = 0.5 * L * w
    du = _det_stack([_bm_kernel(a, s) for a in u])
    dv = _det_stack([_bm_kernel(a, s) for a in vb])
    wprod = ws
    for _ in range(k - 1):
        wprod = np.multiply.outer(wprod, ws)
    z_half = complex(np.sum(wprod * du * dv))
    vand = 1.0 + 0.0j
    for j in range(k):
        for i in range(j):
            vand *= (u[j] - u[i]) * (vb[j] - vb[i])
    return z_half / vand


def edge_multi(n: int, z: complex, ev: EdgeVectors, route: str = "det") -> float:
    """ln of the multi-charge edge expansion at x_j = z - u_j/(conj(z) sqrt N),
    conj(y_j) = conj(z) - conj(v_j)/(z sqrt N) with |z| = 1:
    -> exp(-sum_j (sqrt N (u_j + conj v_j) - (u_j^2 + conj(v_j)^2)/2)
    + (k^2/2) ln N) (2pi)^k / k! * F^edge_k."""
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-12:
        raise ValueError("edge expansion requires |z| = 1")
    k = ev.k
    f = edge_f_det(ev.u, ev.v) if route == "det" else edge_f_km(ev.u, ev.v)
    expo = 0.0 + 0.0j
    for uj, vj in zip(ev.u, ev.v):
        vjb = vj.conjugate()
        expo += -(math.sqrt(n) * (uj + vjb) - 0.5 * (uj * uj + vjb * vjb))
    total = (
        expo
        + 0.5 * k * k * math.log(n)
        + k * math.log(2.0 * math.pi)
        - math.lgamma(k + 1.0)
        + cmath.log(f)
    )
    if abs(math.remainder(total.imag, 2.0 * math.pi)) > 1e-7:
        raise FloatingPointError("edge correlator is not positive real here")
    return float(total.real)


def bulk_multi(n: int, z: complex, ev: EdgeVectors) -> float:
    """ln of the multi-charge bulk expansion at x_i = z + u_i/sqrt(N):
    exp(Nk(|z|^2-1) + sqrt N sum (z conj v + conj z u) + (k^2/2) ln N)
    (2pi)^{k/2} * det{e^{u conj v}}/(Delta Delta) (the G(1+k) factors cancel)."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("bulk expansion requires |z| < 1")
    k = ev.k
    ratio = hciz_ratio(ev.u, ev.v)
    s = sum(z * vj.conjugate() + z.conjugate() * uj for uj, vj in zip(ev.u, ev.v))
    total = (
        n * k * (abs(z) ** 2 - 1.0)
        + math.sqrt(n) * s
        + 0.5 * k * k * math.log(n)
        + 0.5 * k * math.log(2.0 * math.pi)
        + cmath.log(ratio)
    )
    if abs(math.remainder(total.imag, 2.0 * math.pi)) > 1e-7:
        raise FloatingPointError("bulk correlator is not positive real here")
    return float(total.real)


def tcue_edge(n: int, kappa: float, k: int, u: float) -> float:
    """ln of the truncated-CUE boundary expansion at |z| = 1 - u/N:
    k^2 ln N + ln[G(k+kappa+1)/(G(k+1) G(kappa+1))] - (k^2+k kappa) ln(2u)
    + ln F_{k+kappa,k}(2u)."""
    if u <= 0:
        raise ValueError("requires u > 0")
    if kappa < 0:
        raise ValueError("requires kappa >= 0")
    f = _gap.gap_cdf(_gap.LUE(k, float(kappa)), 2.0 * u)
    return float(
        k * k * math.log(n)
        + log_barnes_g(k + kappa + 1.0)
        - log_barnes_g(k + 1.0)
        - log_barnes_g(kappa + 1.0)
        - (k * k + k * kappa) * math.log(2.0 * u)
        + math.log(f)
    )


def ginibre_exterior(n: int, k: float, z: complex) -> float:
    """ln of the exterior expansion 2Nk ln|z| - k^2 ln(1 - |z|^{-2}), |z| > 1."""
    az = abs(complex(z))
    if az <= 1.0:
        raise ValueError("exterior expansion requires |z| > 1")
    if k == 0.0:
        return 0.0
    return float(2.0 * n * k * math.log(az) - k * k * math.log1p(-az ** (-2.0)))


def lemniscate_kappa(d: int) -> float:
    """kappa_d = (1/4) sum_l gamma_l^2 = d(d-1)(2d-1)/(6 d^2)."""
    return d * (d - 1.0) * (2.0 * d - 1.0) / (6.0 * d * d)


def lemniscate_asym(n: int, d: int, t: float, regime: str) -> float:
    """Asymptotic lemniscate ratios (t_c = 1/sqrt(d)):

    sub:      ln[Z_{Nd}(t)/Z_{Nd}(0)] ~ (Ntd)^2 - N t^2 d(d-1)/2,  t < t_c
    critical: the same plus sum_l ln F_{gamma_l/2}(2 tau) with
              tau = sqrt(N)(1 - t/t_c)  (conjectural constant term)
    super:    ln[Z_{Nd}(t)/(Z^{Lem_1}_N(t sqrt d))^d]
              ~ ln c_{N,d} - N(d-1) ln(t/t_c) - kappa_d ln(1-(t_c/t)^2), t > t_c
    """
    tc = 1.0 / math.sqrt(d)
    if regime == "sub":
        if not 0 < t < tc:
            raise ValueError("sub-critical regime needs 0 < t < t_c")
        return (n * t * d) ** 2 - n * t * t * d * (d - 1.0) / 2.0
    if regime == "critical":
        tau = math.sqrt(n) * (1.0 - t / tc)
        out = (n * t * d) ** 2 - n * t * t * d * (d - 1.0) / 2.0
        for g in lemniscate_gamma_exponents(d):
            out += math.log(gue_largest_f(0.5 * g, 2.0 * tau))
        return float(out)
    if regime == "super":
        if t <= tc:
            raise ValueError("super-critical regime needs t > t_c")
        return float(
            log_c_lemniscate(n, d)
            - n * (d - 1.0) * math.log(t / tc)
            - lemniscate_kappa(d) * math.log1p(-((tc / t) ** 2))
        )
    raise ValueError(f"unknown regime {regime!r}")
