"""Pure numpy implementations of the hot loops (fallback backend)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 2048


def _corr_block(khat, khat_conj, inv, a, b, c, d, out, lo, hi):
    p = khat.shape[0]
    z = np.arange(p, dtype=np.int64)
    aa, bb, cc, dd = a[lo:hi, None], b[lo:hi, None], c[lo:hi, None], d[lo:hi, None]
    den = (cc * z + dd) % p
    num = (aa * z + bb) % p
    w = (num * inv[den]) % p
    terms = khat[w] * khat_conj
    terms[den == 0] = 0
    # fixed left-to-right order so results do not depend on block layout
    acc = np.zeros(hi - lo, dtype=complex)
    for j in range(p):
        acc += terms[:, j]
    out[lo:hi] = acc


def corr_batch(khat, inv, a, b, c, d, nthreads: int = 1) -> np.ndarray:
    """C(K; gamma_i) = sum_{z, cz+d != 0} khat[gamma_i z] conj(khat[z]) for each i."""
    khat = np.ascontiguousarray(khat, dtype=np.complex128)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    a, b, c, d = (np.ascontiguousarray(v, dtype=np.int64) for v in (a, b, c, d))
    n = a.shape[0]
    out = np.empty(n, dtype=np.complex128)
    khat_conj = np.conj(khat)[None, :]
    spans = [(lo, min(lo + BLOCK, n)) for lo in range(0, n, BLOCK)]
    if nthreads <= 1 or len(spans) <= 1:
        for lo, hi in spans:
            _corr_block(khat, khat_conj, inv, a, b, c, d, out, lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            list(pool.map(lambda s: _corr_block(khat, khat_conj, inv, a, b, c, d, out, *s), spans))
    return out
