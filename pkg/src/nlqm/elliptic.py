"""Real-argument Jacobi elliptic functions and the incomplete integral F.

Evaluation backbone is the arithmetic-geometric mean (Landen descent) for
0 <= m < 1.  Parameters outside [0, 1] are routed through the standard
transformations:

  m < 0  (negative parameter):   m1 = -m/(1-m),  v = u*sqrt(1-m)
         sn(u|m) = sd(v|m1)/sqrt(1-m), cn = cd(v|m1), dn = nd(v|m1)
  m > 1  (reciprocal parameter): m1 = 1/m,       v = u*sqrt(m)
         sn(u|m) = sn(v|m1)/sqrt(m),   cn = dn(v|m1), dn = cn(v|m1)

All public outputs are real.  The imaginary-argument combination
-2i*am(i*u | m), needed by the oscillatory closed form of the reduced
dynamics, is produced through the same real identities (am_imag).
"""

from __future__ import annotations

import math

from .errors import AccuracyError, DomainError

_EPS = 1e-16
_MAX_ITER = 32


def _check_finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite argument: {v!r}")


def _agm_scale(m: float):
    """AGM sequence a_i, c_i for parameter 0 <= m < 1.

    Returns (a_list, c_list, n) with c_n/a_n below machine tolerance.
    """
    a, b = 1.0, math.sqrt(1.0 - m)
    a_seq = [a]
    c_seq = [math.sqrt(m)]
    for _ in range(_MAX_ITER):
        an = 0.5 * (a + b)
        c = 0.5 * (a - b)
        b = math.sqrt(a * b)
        a = an
        a_seq.append(a)
        c_seq.append(c)
        if abs(c) <= _EPS * a:
            break
    return a_seq, c_seq


def ellip_k(m: float) -> float:
    """Complete elliptic integral K(m) = F(pi/2 | m), for m < 1.

    Valid for any m < 1 (including m < 0) via K = pi / (2 agm(1, sqrt(1-m))).
    Returns inf at m = 1; raises DomainError for m > 1 (F(pi/2|m) diverges
    into the complex plane there).
    """
    _check_finite(m)
    if m == 1.0:
        return math.inf
    if m > 1.0:
        raise DomainError("K(m) with m > 1 is not real; use ellip_f below the singular angle")
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(_MAX_ITER):
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        if abs(a - b) <= _EPS * a:
            break
    return math.pi / (2.0 * a)


def _f_core(phi: float, m: float) -> float:
    """F(phi|m) for 0 <= m < 1 and |phi| <= pi/2, via ascending-angle AGM."""
    if phi == 0.0:
        return 0.0
    if m == 0.0:
        return phi
    a, b = 1.0, math.sqrt(1.0 - m)
    scale = 1.0
    for _ in range(_MAX_ITER):
        # doubled angle with branch-free correction: phi' = 2 phi + e,
        # tan(phi + e) = (b/a) tan(phi), e in (-pi/2, pi/2)
        s, c = math.sin(phi), math.cos(phi)
        e = math.atan2((b - a) * s * c, a * c * c + b * s * s)
        phi = 2.0 * phi + e
        scale *= 0.5
        an = 0.5 * (a + b)
        b = math.sqrt(a * b)
        a = an
        if abs(a - b) <= _EPS * a:
            break
    return phi * scale / a


def ellip_f(phi: float, m: float) -> float:
    """Incomplete elliptic integral F(phi|m) = int_0^phi dtheta / sqrt(1 - m sin^2 theta).

    Extended to all real phi by quasi-periodicity F(phi + pi|m) = F(phi|m) + 2K(m)
    for m < 1.  For m > 1 the integrand turns singular at sin^2 theta = 1/m;
    angles beyond that point raise DomainError.
    """
    _check_finite(phi, m)
    if m == 0.0:
        return phi
    if m < 0.0:
        # negative-parameter transformation, applied after angle reduction
        n_half = round(phi / math.pi)
        phi_r = phi - n_half * math.pi
        m1 = -m / (1.0 - m)
        root = math.sqrt(1.0 - m)
        sin_r = math.sin(phi_r)
        theta = math.asin(
            max(-1.0, min(1.0, root * sin_r / math.sqrt(1.0 - m * sin_r * sin_r)))
        )
        value = _f_core(theta, m1) / root
        if n_half:
            value += 2.0 * n_half * ellip_k(m)
        return value
    if m <= 1.0:
        if m == 1.0:
            s = math.sin(phi)
            if abs(phi) >= 0.5 * math.pi:
                raise DomainError("F(phi|1) diverges at |phi| >= pi/2")
            return math.atanh(s)
        n_half = round(phi / math.pi)
        phi_r = phi - n_half * math.pi
        value = _f_core(phi_r, m)
        if n_half:
            value += 2.0 * n_half * ellip_k(m)
        return value
    # m > 1: reciprocal-parameter transformation
    sin_phi = math.sin(phi)
    if m * sin_phi * sin_phi > 1.0 + 4.0 * _EPS:
        raise DomainError(
            f"integrand singular: m sin^2(phi) = {m * sin_phi * sin_phi:.6g} >= 1"
        )
    root_m = math.sqrt(m)
    theta = math.asin(max(-1.0, min(1.0, root_m * sin_phi)))
    return _f_core(theta, 1.0 / m) / root_m


def _am_core(u: float, m: float) -> float:
    """Jacobi amplitude am(u|m) for 0 <= m < 1, any real u, via AGM descent."""
    if u == 0.0 or m == 0.0:
        return u
    # reduce by the half-period: am(u + 2K) = am(u) + pi
    k_quarter = ellip_k(m)
    n_half = round(u / (2.0 * k_quarter))
    u_r = u - 2.0 * n_half * k_quarter
    a_seq, c_seq = _agm_scale(m)
    n = len(a_seq) - 1
    phi = math.ldexp(1.0, n) * a_seq[n] * u_r
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, c_seq[i] * math.sin(phi) / a_seq[i]))))
    return phi + n_half * math.pi


def jacobi_am(u: float, m: float) -> float:
    """Jacobi amplitude am(u|m); inverse of F, so am(F(phi|m)|m) = phi.

    Monotone increasing and unbounded in u for m < 1; for m > 1 the
    amplitude librates and the principal (bounded) branch is returned.
    """
    _check_finite(u, m)
    if m == 0.0:
        return u
    if 0.0 <= m < 1.0:
        return _am_core(u, m)
    if m == 1.0:
        return 2.0 * math.atan(math.exp(u)) - 0.5 * math.pi  # gudermannian
    if m < 0.0:
        k_quarter = ellip_k(m)
        n_half = round(u / (2.0 * k_quarter))
        u_r = u - 2.0 * n_half * k_quarter
        sn, _, _ = jacobi_sn_cn_dn(u_r, m)
        return math.asin(max(-1.0, min(1.0, sn))) + n_half * math.pi
    sn, _, _ = jacobi_sn_cn_dn(u, m)
    return math.asin(max(-1.0, min(1.0, sn)))


def jacobi_sn_cn_dn(u: float, m: float):
    """Jacobi elliptic sn, cn, dn at (u|m) for any real parameter m.

    sn = sin(am), cn = cos(am); dn satisfies dn^2 + m sn^2 = 1 and equals
    d(am)/du (for m > 1 this continuation makes dn change sign where the
    amplitude turns around).
    """
    _check_finite(u, m)
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if 0.0 < m < 1.0:
        phi = _am_core(u, m)
        sn, cn = math.sin(phi), math.cos(phi)
        return sn, cn, math.sqrt(max(0.0, 1.0 - m * sn * sn))
    if m == 1.0:
        return math.tanh(u), 1.0 / math.cosh(u), 1.0 / math.cosh(u)
    if m < 0.0:
        m1 = -m / (1.0 - m)
        root = math.sqrt(1.0 - m)
        s, c, d = jacobi_sn_cn_dn(u * root, m1)
        return s / (d * root), c / d, 1.0 / d
    # m > 1
    m1 = 1.0 / m
    root = math.sqrt(m)
    s, c, d = jacobi_sn_cn_dn(u * root, m1)
    return s / root, d, c


def am_imag(u: float, m: float) -> float:
    """Real value of -2i * am(i*u | m) for negative parameter m.

    Computed entirely through real identities:

        -2i*am(i*u|m) = 2 asinh( sd(v | m1) / sqrt(1-m) ),
        v = u*sqrt(1-m),  m1 = 1/(1-m) in (0, 1).

    The result y(u) is odd, periodic, and solves y'' = m sinh y with
    y(0) = 0, y'(0) = 2.  An internal first-integral audit
    (y'^2/2 - m cosh y = 2 - m, with y' = 2 cd(v|m1)) guards the
    transformation chain.
    """
    _check_finite(u, m)
    if m >= 0.0:
        raise DomainError(f"am_imag requires m < 0, got m = {m!r}")
    root = math.sqrt(1.0 - m)
    m1 = 1.0 / (1.0 - m)
    s, c, d = jacobi_sn_cn_dn(u * root, m1)
    y = 2.0 * math.asinh(s / (d * root))
    deriv = 2.0 * c / d
    residual = abs(0.5 * deriv * deriv - m * math.cosh(y) - (2.0 - m))
    if residual > 1e-10 * max(1.0, abs(m) * math.cosh(y)):
        raise AccuracyError(
            f"imaginary-argument transformation chain inconsistent: residual {residual:.3e}"
        )
    return y


def am_imag_deriv(u: float, m: float) -> float:
    """d/du of am_imag: equals 2 dn(i*u|m) evaluated through real identities."""
    _check_finite(u, m)
    if m >= 0.0:
        raise DomainError(f"am_imag_deriv requires m < 0, got m = {m!r}")
    root = math.sqrt(1.0 - m)
    m1 = 1.0 / (1.0 - m)
    _, c, d = jacobi_sn_cn_dn(u * root, m1)
    return 2.0 * c / d


def am_imag_period(m: float) -> float:
    """Period in u of am_imag(u, m), i.e. 4 K(1/(1-m)) / sqrt(1-m)."""
    _check_finite(m)
    if m >= 0.0:
        raise DomainError(f"am_imag_period requires m < 0, got m = {m!r}")
    root = math.sqrt(1.0 - m)
    return 4.0 * ellip_k(1.0 / (1.0 - m)) / root
