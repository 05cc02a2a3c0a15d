"""Pure-numpy kernels.

Reference implementations of the hot numeric paths. Semantics are shared
with the numba backend; see kernels/__init__.py for selection.
"""

import itertools
import math

import numpy as np

BACKEND = "numpy"

# combinations per batch when enumerating subsets
_CHUNK = 16384


def _trace_inv_psd(g):
    """tr(g^{-1}) for a Hermitian matrix via Cholesky, +inf if not PD."""
    try:
        low = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        return math.inf
    linv = np.linalg.solve(low, np.eye(g.shape[0], dtype=np.complex128))
    return float(np.sum(linv.real * linv.real + linv.imag * linv.imag))


def trace_inv_gram(rows, ridge):
    """tr((rows^H rows + ridge*I)^{-1}) for an (m, n) complex matrix.

    Returns +inf when the (possibly unregularized) Gram is not positive
    definite.
    """
    rows = np.asarray(rows, dtype=np.complex128)
    if rows.ndim == 1:
        rows = rows[None, :]
    n = rows.shape[1]
    g = rows.conj().T @ rows
    if ridge != 0.0:
        g = g + ridge * np.eye(n)
    return _trace_inv_psd(g)


def exhaustive_search(hbar, k):
    """Minimize tr((A^H A)^{-1}) over all size-k row subsets A of hbar.

    Enumeration is lexicographic; ties keep the first (smallest) subset.
    Returns (best_combination, best_trace).
    """
    hbar = np.asarray(hbar, dtype=np.complex128)
    n = hbar.shape[0]
    eye = np.eye(k, dtype=np.complex128)
    best_trace = math.inf
    best = np.arange(k, dtype=np.int64)
    comb_iter = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(comb_iter, _CHUNK))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64)
        sub = hbar[idx]                                   # (B, k, K)
        gram = sub.conj().transpose(0, 2, 1) @ sub        # (B, K, K)
        try:
            low = np.linalg.cholesky(gram)
            linv = np.linalg.solve(low, np.broadcast_to(eye, gram.shape))
            traces = np.sum(linv.real**2 + linv.imag**2, axis=(1, 2))
        except np.linalg.LinAlgError:
            # some subset is singular; fall back to one-at-a-time
            traces = np.array([_trace_inv_psd(g) for g in gram])
        pos = int(np.argmin(traces))
        if traces[pos] < best_trace:
            best_trace = float(traces[pos])
            best = idx[pos].copy()
    return best, best_trace


def border_scores(assigned, cands, ridge):
    """tr(((G G^H) + ridge*I)^{-1}) with G = assigned rows plus one candidate.

    assigned: (m0, n) complex rows already fixed; cands: (C, n) candidate
    rows tried one at a time. Returns a length-C float array. Uses the
    bordered-Cholesky identity so the fixed block is factorized once.
    """
    assigned = np.asarray(assigned, dtype=np.complex128)
    cands = np.atleast_2d(np.asarray(cands, dtype=np.complex128))
    m0 = assigned.shape[0]
    diag = np.sum(cands.real**2 + cands.imag**2, axis=1) + ridge
    if m0 == 0:
        return 1.0 / diag
    base_gram = assigned @ assigned.conj().T + ridge * np.eye(m0)
    try:
        low = np.linalg.cholesky(base_gram)
    except np.linalg.LinAlgError:
        return np.full(cands.shape[0], math.inf)
    linv = np.linalg.solve(low, np.eye(m0, dtype=np.complex128))
    base = float(np.sum(linv.real**2 + linv.imag**2))
    cross = assigned @ cands.conj().T                     # (m0, C)
    w = np.linalg.solve(low, cross)
    z = np.linalg.solve(low.conj().T, w)
    pivot = diag - np.sum(w.real**2 + w.imag**2, axis=0)
    scores = np.full(cands.shape[0], math.inf)
    ok = pivot > 0.0
    scores[ok] = base + (1.0 + np.sum(z.real**2 + z.imag**2, axis=0)[ok]) / pivot[ok]
    return scores


def aco_sweep(hbar, cand_idx, cand_count, beams, tau,
              pher_w, heur_w, decay, feedback, ridge, scale,
              t_max, roulette, uniforms):
    """Candidate-sweep loop of the colony selector.

    Mutates `beams` (working set, one beam per user) and `tau` (pheromone
    table) in place. Per visit of user k the utility of every candidate is
    the ridge-regularized trace metric of the working set with user k's row
    replaced, computed via a rank-one update of the row-removed Gram.

    Returns (best_set, best_trace, hist_beam, hist_d, hist_best) where the
    history row r = t*K + k records the visit of user k in iteration t.
    """
    n_users = beams.shape[0]
    rows = hbar[beams]                                    # working rows (K, K)
    best = beams.copy()
    best_trace = math.inf
    total = t_max * n_users
    hist_beam = np.empty(total, dtype=np.int64)
    hist_d = np.empty(total, dtype=np.float64)
    hist_best = np.empty(total, dtype=np.float64)
    eye = ridge * np.eye(n_users, dtype=np.complex128)
    r = 0
    for t in range(t_max):
        for k in range(n_users):
            others = np.delete(rows, k, axis=0)
            g0 = others.conj().T @ others + eye
            nb = int(cand_count[k])
            cand_rows = hbar[cand_idx[k, :nb]]            # (nb, K)
            try:
                low = np.linalg.cholesky(g0)
                linv = np.linalg.solve(low, np.eye(n_users, dtype=np.complex128))
                tr0 = float(np.sum(linv.real**2 + linv.imag**2))
                x = np.linalg.solve(low.conj().T, np.linalg.solve(low, cand_rows.conj().T))
                quad = np.einsum("bk,kb->b", cand_rows, x).real
                xnorm = np.sum(x.real**2 + x.imag**2, axis=0)
                d = tr0 - xnorm / (1.0 + quad)
            except np.linalg.LinAlgError:
                # row-removed Gram singular (ridge == 0): evaluate directly
                d = np.empty(nb)
                for b in range(nb):
                    repl = rows.copy()
                    repl[k] = cand_rows[b]
                    d[b] = trace_inv_gram(repl, ridge)
            eta = np.exp(-d / scale)
            weights = tau[k, :nb] ** pher_w * eta ** heur_w
            wsum = weights.sum()
            if wsum > 0.0:
                p = weights / wsum
            else:
                p = np.full(nb, 1.0 / nb)
            tau[k, :nb] = (1.0 - decay) * tau[k, :nb] + feedback * eta * p
            if roulette:
                draw = uniforms[t, k]
                b_sel = int(np.searchsorted(np.cumsum(p), draw))
                if b_sel >= nb:
                    b_sel = nb - 1
            else:
                b_sel = int(np.argmax(p))
            beams[k] = cand_idx[k, b_sel]
            rows[k] = cand_rows[b_sel]
            d_sel = float(d[b_sel])
            if d_sel <= best_trace:
                best_trace = d_sel
                best[:] = beams
            hist_beam[r] = beams[k]
            hist_d[r] = d_sel
            hist_best[r] = best_trace
            r += 1
    return best, best_trace, hist_beam, hist_d, hist_best
