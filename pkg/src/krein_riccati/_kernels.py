"""Hot loops: Hessenberg reduction, complex shifted QR, triangular
eigenvectors and batched resolvent solves.

Every function here is written in the numpy subset numba understands, so
the same source runs compiled or, with ``KREIN_RICCATI_NUMBA=0``, as plain
numpy.
"""
import numpy as np

from ._accel import kernel

EPS = 2.220446049250313e-16


@kernel
def hessenberg(a):
    """Householder reduction ``a = q @ h @ q^H`` with ``h`` upper Hessenberg."""
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        xnorm = np.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
        if xnorm == 0.0:
            continue
        x0 = x[0]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        v = x
        v[0] = x0 + phase * xnorm
        vnorm = np.sqrt(np.sum(v.real ** 2 + v.imag ** 2))
        v = v / vnorm
        vc = np.conj(v)
        rows = np.ascontiguousarray(h[k + 1:, :])
        h[k + 1:, :] = rows - 2.0 * np.outer(v, np.dot(vc, rows))
        cols = np.ascontiguousarray(h[:, k + 1:])
        h[:, k + 1:] = cols - 2.0 * np.outer(np.dot(cols, v), vc)
        qcols = np.ascontiguousarray(q[:, k + 1:])
        q[:, k + 1:] = qcols - 2.0 * np.outer(np.dot(qcols, v), vc)
        h[k + 2:, k] = 0.0
    return h, q


@kernel
def schur_qr(h, z, maxiter):
    """Shifted QR on Hessenberg ``h`` in place; ``z`` accumulates rotations.

    Returns the total iteration count, or -1 if ``maxiter`` was exceeded.
    On success ``h`` is upper triangular (complex Schur form).
    """
    n = h.shape[0]
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            hnorm = max(hnorm, abs(h[i, j]))
    if hnorm == 0.0:
        return 0
    hi = n - 1
    total = 0
    its = 0
    cs = np.zeros(n, dtype=np.float64)
    sn = np.zeros(n, dtype=np.complex128)
    while hi > 0:
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = hnorm
            if abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        total += 1
        if total > maxiter:
            return -1
        if its % 11 == 0:
            # exceptional shift breaks rare cycling
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            d = h[hi, hi]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            m1 = d + half + disc
            m2 = d + half - disc
            mu = m1 if abs(m1 - d) < abs(m2 - d) else m2
        for k in range(lo, hi + 1):
            h[k, k] -= mu
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            ax = abs(x)
            r = np.sqrt(ax * ax + abs(y) ** 2)
            if r == 0.0:
                c_ = 1.0
                s_ = 0.0 + 0.0j
            elif ax == 0.0:
                c_ = 0.0
                s_ = np.conj(y) / abs(y)
            else:
                c_ = ax / r
                s_ = (x / ax) * np.conj(y) / r
            cs[k] = c_
            sn[k] = s_
            r1 = h[k, k:].copy()
            r2 = h[k + 1, k:].copy()
            h[k, k:] = c_ * r1 + s_ * r2
            h[k + 1, k:] = -np.conj(s_) * r1 + c_ * r2
            h[k + 1, k] = 0.0
        for k in range(lo, hi):
            c_ = cs[k]
            s_ = sn[k]
            top = k + 2
            c1 = h[:top, k].copy()
            c2 = h[:top, k + 1].copy()
            h[:top, k] = c_ * c1 + np.conj(s_) * c2
            h[:top, k + 1] = -s_ * c1 + c_ * c2
            z1 = z[:, k].copy()
            z2 = z[:, k + 1].copy()
            z[:, k] = c_ * z1 + np.conj(s_) * z2
            z[:, k + 1] = -s_ * z1 + c_ * z2
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return total


@kernel
def triangular_eigvecs(r):
    """Columns ``y_k`` with ``r @ y_k = r[k, k] * y_k`` by back substitution.

    Denominators below ``eps * |r|`` are perturbed to that floor, as for
    repeated diagonal entries.
    """
    n = r.shape[0]
    rnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            rnorm = max(rnorm, abs(r[i, j]))
    smin = max(EPS * rnorm, 1e-300)
    y = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        lam = r[k, k]
        y[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            s = 0.0j
            for j in range(i + 1, k + 1):
                s += r[i, j] * y[j, k]
            den = r[i, i] - lam
            if abs(den) < smin:
                den = smin + 0.0j
            y[i, k] = -s / den
            if abs(y[i, k]) > 1e150:
                y[:, k] = y[:, k] / abs(y[i, k])
        s2 = 0.0
        for i in range(k + 1):
            s2 += abs(y[i, k]) ** 2
        nrm = np.sqrt(s2)
        for i in range(k + 1):
            y[i, k] = y[i, k] / nrm
    return y


@kernel
def resolvent_apply(t, x, zs):
    """Stack of ``(t - z I)^{-1} x`` for every shift ``z`` in ``zs``."""
    n = t.shape[0]
    out = np.empty((zs.shape[0], n, x.shape[1]), dtype=np.complex128)
    shifted = np.empty((n, n), dtype=np.complex128)
    for j in range(zs.shape[0]):
        shifted[:, :] = t
        for i in range(n):
            shifted[i, i] -= zs[j]
        out[j] = np.linalg.solve(shifted, x)
    return out


@kernel
def weighted_resolvent_sum(t, x, zs, ws):
    """``sum_j ws[j] (t - zs[j] I)^{-1} x`` in fixed node order."""
    n = t.shape[0]
    acc = np.zeros((n, x.shape[1]), dtype=np.complex128)
    shifted = np.empty((n, n), dtype=np.complex128)
    for j in range(zs.shape[0]):
        shifted[:, :] = t
        for i in range(n):
            shifted[i, i] -= zs[j]
        acc += ws[j] * np.linalg.solve(shifted, x)
    return acc


@kernel
def weighted_resolvent_sqnorm(t, x, zs, ws):
    """Per column of ``x``: ``sum_j ws[j] |(t - zs[j] I)^{-1} x|^2``."""
    n = t.shape[0]
    acc = np.zeros(x.shape[1], dtype=np.float64)
    shifted = np.empty((n, n), dtype=np.complex128)
    for j in range(zs.shape[0]):
        shifted[:, :] = t
        for i in range(n):
            shifted[i, i] -= zs[j]
        y = np.linalg.solve(shifted, x)
        acc += ws[j] * np.sum(y.real ** 2 + y.imag ** 2, axis=0)
    return acc
