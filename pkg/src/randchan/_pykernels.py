"""Vectorised numpy fallback for the compiled kernels."""
import numpy as np


def cycle_keys(comp: np.ndarray) -> np.ndarray:
    """Class keys ``sum_r c_r (p+1)^(r-1)`` for each row of a batch of permutations."""
    m, p = comp.shape
    base = p + 1
    ident = np.arange(p)
    cur = comp.astype(np.int64)
    lengths = np.zeros((m, p), dtype=np.int64)
    for step in range(1, p + 1):
        hit = (cur == ident) & (lengths == 0)
        lengths[hit] = step
        cur = np.take_along_axis(comp, cur, axis=1)
    # each r-cycle has r points carrying length r
    out = np.zeros(m, dtype=np.int64)
    for r in range(1, p + 1):
        out += ((lengths == r).sum(axis=1) // r) * base ** (r - 1)
    return out


def pair_histogram(perms, invperms, e1, e2, e3, class_lookup, ncls):
    """Count ``H[e1[a], e2[a], e3[b], class(a^-1 b)]`` over all pairs ``(a, b)``."""
    P, p = perms.shape
    base = p + 1
    H = np.zeros((base, base, base, ncls), dtype=np.int64)
    perms = perms.astype(np.int64)
    e3 = np.asarray(e3, dtype=np.int64)
    lookup = np.asarray(class_lookup, dtype=np.int64)
    for a in range(P):
        comp = invperms[a].astype(np.int64)[perms]
        cls = lookup[cycle_keys(comp)]
        flat = np.bincount(e3 * ncls + cls, minlength=base * ncls)
        H[e1[a], e2[a]] += flat.reshape(base, ncls)
    return H
