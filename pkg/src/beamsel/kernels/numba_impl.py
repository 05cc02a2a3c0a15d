"""Numba-accelerated kernels.

Call signatures and semantics mirror kernels.numpy_impl. Functions are
compiled on first use and cached on disk, so the first call in a fresh
environment pays a one-time JIT cost.
"""

import math

import numpy as np
from numba import njit

BACKEND = "numba"


@njit(cache=True, nogil=True)
def _cholesky(g):
    """In-place lower Cholesky of a Hermitian matrix. Returns False if the
    matrix is not positive definite. Only the lower triangle is read."""
    n = g.shape[0]
    for j in range(n):
        acc = g[j, j].real
        for p in range(j):
            acc -= g[j, p].real ** 2 + g[j, p].imag ** 2
        if acc <= 0.0:
            return False
        piv = math.sqrt(acc)
        g[j, j] = piv
        for i in range(j + 1, n):
            s = g[i, j]
            for p in range(j):
                s -= g[i, p] * np.conj(g[j, p])
            g[i, j] = s / piv
    return True


@njit(cache=True, nogil=True)
def _frob2_tri_inv(low):
    """Squared Frobenius norm of low^{-1}, i.e. tr((low @ low^H)^{-1})."""
    n = low.shape[0]
    x = np.empty(n, np.complex128)
    total = 0.0
    for j in range(n):
        x[j] = 1.0 / low[j, j]
        total += x[j].real ** 2 + x[j].imag ** 2
        for i in range(j + 1, n):
            s = 0j
            for p in range(j, i):
                s += low[i, p] * x[p]
            x[i] = -s / low[i, i]
            total += x[i].real ** 2 + x[i].imag ** 2
    return total


@njit(cache=True, nogil=True)
def _forward(low, v, out):
    """Solve low @ out = v for lower-triangular low."""
    n = low.shape[0]
    for i in range(n):
        s = v[i]
        for p in range(i):
            s -= low[i, p] * out[p]
        out[i] = s / low[i, i]


@njit(cache=True, nogil=True)
def _backward(low, v, out):
    """Solve low^H @ out = v for lower-triangular low."""
    n = low.shape[0]
    for i in range(n - 1, -1, -1):
        s = v[i]
        for p in range(i + 1, n):
            s -= np.conj(low[p, i]) * out[p]
        out[i] = s / np.conj(low[i, i])


@njit(cache=True, nogil=True)
def _trace_inv_gram_impl(rows, ridge):
    m, n = rows.shape
    g = np.zeros((n, n), np.complex128)
    for i in range(n):
        for j in range(i + 1):
            acc = 0j
            for r in range(m):
                acc += np.conj(rows[r, i]) * rows[r, j]
            g[i, j] = acc
        g[i, i] += ridge
    if not _cholesky(g):
        return np.inf
    return _frob2_tri_inv(g)


@njit(cache=True, nogil=True)
def _exhaustive_impl(hbar, k):
    n, ku = hbar.shape
    # rank-one Gram contribution of each row
    outers = np.empty((n, ku, ku), np.complex128)
    for m in range(n):
        for i in range(ku):
            ci = np.conj(hbar[m, i])
            for j in range(i + 1):
                outers[m, i, j] = ci * hbar[m, j]
    # depth-first lexicographic enumeration with cached prefix Grams;
    # prefix[d] holds the Gram of the first d chosen rows (lower triangle)
    prefix = np.zeros((k, ku, ku), np.complex128)
    scratch = np.empty((ku, ku), np.complex128)
    comb = np.empty(k, np.int64)
    best = np.empty(k, np.int64)
    for i in range(k):
        best[i] = i
    best_trace = np.inf
    d = 0
    comb[0] = -1
    while d >= 0:
        comb[d] += 1
        if comb[d] > n - k + d:
            d -= 1
            continue
        m = comb[d]
        if d == k - 1:
            for i in range(ku):
                for j in range(i + 1):
                    scratch[i, j] = prefix[d, i, j] + outers[m, i, j]
            if _cholesky(scratch):
                t = _frob2_tri_inv(scratch)
                if t < best_trace:
                    best_trace = t
                    for i in range(k):
                        best[i] = comb[i]
        else:
            for i in range(ku):
                for j in range(i + 1):
                    prefix[d + 1, i, j] = prefix[d, i, j] + outers[m, i, j]
            d += 1
            comb[d] = comb[d - 1]
    return best, best_trace


@njit(cache=True, nogil=True)
def _border_impl(assigned, cands, ridge):
    m0, ku = assigned.shape
    c_n = cands.shape[0]
    out = np.empty(c_n, np.float64)
    if m0 == 0:
        for ci in range(c_n):
            s = ridge
            for p in range(ku):
                s += cands[ci, p].real ** 2 + cands[ci, p].imag ** 2
            out[ci] = 1.0 / s
        return out
    low = np.empty((m0, m0), np.complex128)
    for i in range(m0):
        for j in range(i + 1):
            acc = 0j
            for p in range(ku):
                acc += assigned[i, p] * np.conj(assigned[j, p])
            low[i, j] = acc
        low[i, i] += ridge
    if not _cholesky(low):
        for ci in range(c_n):
            out[ci] = np.inf
        return out
    base = _frob2_tri_inv(low)
    v = np.empty(m0, np.complex128)
    w = np.empty(m0, np.complex128)
    z = np.empty(m0, np.complex128)
    for ci in range(c_n):
        s = ridge
        for p in range(ku):
            s += cands[ci, p].real ** 2 + cands[ci, p].imag ** 2
        for i in range(m0):
            acc = 0j
            for p in range(ku):
                acc += assigned[i, p] * np.conj(cands[ci, p])
            v[i] = acc
        _forward(low, v, w)
        wn = 0.0
        for i in range(m0):
            wn += w[i].real ** 2 + w[i].imag ** 2
        piv = s - wn
        if piv <= 0.0:
            out[ci] = np.inf
            continue
        _backward(low, w, z)
        zn = 0.0
        for i in range(m0):
            zn += z[i].real ** 2 + z[i].imag ** 2
        out[ci] = base + (1.0 + zn) / piv
    return out


@njit(cache=True, nogil=True)
def _aco_impl(hbar, cand_idx, cand_count, beams, tau,
              pher_w, heur_w, decay, feedback, ridge, scale,
              t_max, roulette, uniforms):
    n_users = beams.shape[0]
    bmax = cand_idx.shape[1]
    g0 = np.empty((n_users, n_users), np.complex128)
    low = np.empty((n_users, n_users), np.complex128)
    y = np.empty(n_users, np.complex128)
    x = np.empty(n_users, np.complex128)
    ch = np.empty(n_users, np.complex128)
    d = np.empty(bmax, np.float64)
    eta = np.empty(bmax, np.float64)
    p = np.empty(bmax, np.float64)
    best = beams.copy()
    best_trace = np.inf
    total = t_max * n_users
    hist_beam = np.empty(total, np.int64)
    hist_d = np.empty(total, np.float64)
    hist_best = np.empty(total, np.float64)
    r = 0
    for t in range(t_max):
        for k in range(n_users):
            # ridge-regularized Gram of the working set without user k's row
            for i in range(n_users):
                for j in range(i + 1):
                    acc = 0j
                    for u in range(n_users):
                        if u != k:
                            m = beams[u]
                            acc += np.conj(hbar[m, i]) * hbar[m, j]
                    g0[i, j] = acc
                g0[i, i] += ridge
            for i in range(n_users):
                for j in range(i + 1):
                    low[i, j] = g0[i, j]
            ok = _cholesky(low)
            nb = cand_count[k]
            if ok:
                tr0 = _frob2_tri_inv(low)
                for b in range(nb):
                    row = cand_idx[k, b]
                    for i in range(n_users):
                        ch[i] = np.conj(hbar[row, i])
                    _forward(low, ch, y)
                    _backward(low, y, x)
                    quad = 0.0
                    xn = 0.0
                    for i in range(n_users):
                        quad += (hbar[row, i] * x[i]).real
                        xn += x[i].real ** 2 + x[i].imag ** 2
                    d[b] = tr0 - xn / (1.0 + quad)
            else:
                # ridge-free rank-deficient base: evaluate replacements directly
                for b in range(nb):
                    rowb = cand_idx[k, b]
                    for i in range(n_users):
                        for j in range(i + 1):
                            acc = 0j
                            for u in range(n_users):
                                m = rowb if u == k else beams[u]
                                acc += np.conj(hbar[m, i]) * hbar[m, j]
                            low[i, j] = acc
                        low[i, i] += ridge
                    d[b] = _frob2_tri_inv(low) if _cholesky(low) else np.inf
            wsum = 0.0
            for b in range(nb):
                eta[b] = math.exp(-d[b] / scale)
                w = tau[k, b] ** pher_w * eta[b] ** heur_w
                p[b] = w
                wsum += w
            if wsum > 0.0:
                for b in range(nb):
                    p[b] /= wsum
            else:
                for b in range(nb):
                    p[b] = 1.0 / nb
            for b in range(nb):
                tau[k, b] = (1.0 - decay) * tau[k, b] + feedback * eta[b] * p[b]
            if roulette:
                u01 = uniforms[t, k]
                cum = 0.0
                b_sel = nb - 1
                for b in range(nb):
                    cum += p[b]
                    if cum >= u01:
                        b_sel = b
                        break
            else:
                b_sel = 0
                pbest = p[0]
                for b in range(1, nb):
                    if p[b] > pbest:
                        pbest = p[b]
                        b_sel = b
            beams[k] = cand_idx[k, b_sel]
            d_sel = d[b_sel]
            if d_sel <= best_trace:
                best_trace = d_sel
                for i in range(n_users):
                    best[i] = beams[i]
            hist_beam[r] = beams[k]
            hist_d[r] = d_sel
            hist_best[r] = best_trace
            r += 1
    return best, best_trace, hist_beam, hist_d, hist_best


def trace_inv_gram(rows, ridge):
    """tr((rows^H rows + ridge*I)^{-1}); +inf when not positive definite."""
    rows = np.ascontiguousarray(np.atleast_2d(np.asarray(rows, dtype=np.complex128)))
    return float(_trace_inv_gram_impl(rows, float(ridge)))


def exhaustive_search(hbar, k):
    """Lexicographic scan of all size-k row subsets minimizing the exact
    trace metric. Returns (best_combination, best_trace)."""
    hbar = np.ascontiguousarray(np.asarray(hbar, dtype=np.complex128))
    best, trace = _exhaustive_impl(hbar, int(k))
    return best, float(trace)


def border_scores(assigned, cands, ridge):
    """Regularized trace metric of [assigned; c] @ [assigned; c]^H for each
    candidate row c, sharing the factorization of the fixed block."""
    assigned = np.ascontiguousarray(np.asarray(assigned, dtype=np.complex128))
    cands = np.ascontiguousarray(np.atleast_2d(np.asarray(cands, dtype=np.complex128)))
    return _border_impl(assigned, cands, float(ridge))


def aco_sweep(hbar, cand_idx, cand_count, beams, tau,
              pher_w, heur_w, decay, feedback, ridge, scale,
              t_max, roulette, uniforms):
    """Candidate-sweep loop of the colony selector; mutates beams and tau.

    See kernels.numpy_impl.aco_sweep for the full contract.
    """
    hbar = np.ascontiguousarray(np.asarray(hbar, dtype=np.complex128))
    return _aco_impl(hbar, cand_idx, cand_count, beams, tau,
                     float(pher_w), float(heur_w), float(decay), float(feedback),
                     float(ridge), float(scale), int(t_max), bool(roulette),
                     uniforms)
