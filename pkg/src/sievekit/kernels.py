"""Hot integer kernels, each with a numba and a pure-numpy implementation.

Two workloads dominate: the associativity scan over composition tables and
the brute-force search for families of subobjects (sieves, ideals) closed
under a set of Horn clauses. Families are bitmasks over a candidate list, so
at most 63 candidates are supported.

The public entry points dispatch on :func:`sievekit._accel.numba_enabled`.
"""
import numpy as np

from sievekit._accel import njit, numba_enabled

MAX_BITS = 63
_CHUNK = 1 << 16


# -- associativity --------------------------------------------------------

def _first_nonassociative_py(comp):
    m = comp.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for h in range(m):
        for g in range(m):
            hg = comp[h, g]
            if hg < 0:
                continue
            for f in range(m):
                gf = comp[g, f]
                if gf < 0:
                    continue
                left = comp[h, gf]
                right = comp[hg, f]
                if left != right:
                    out[0] = h
                    out[1] = g
                    out[2] = f
                    return out
    return out


_first_nonassociative_nb = njit(_first_nonassociative_py)


def _first_nonassociative_np(comp):
    m = comp.shape[0]
    for h in range(m):
        hg = comp[h]
        g_ok = hg >= 0
        if not g_ok.any():
            continue
        gf = comp
        ok = g_ok[:, None] & (gf >= 0)
        left = np.where(ok, comp[h, np.where(gf >= 0, gf, 0)], -2)
        right = np.where(ok, comp[np.where(g_ok, hg, 0)][:, :], -2)
        bad = ok & (left != right)
        if bad.any():
            g, f = np.argwhere(bad)[0]
            return np.array([h, g, f], dtype=np.int64)
    return np.full(3, -1, dtype=np.int64)


def first_nonassociative(comp):
    """First triple ``(h, g, f)`` in lexicographic order with
    ``h.(g.f) != (h.g).f``, or ``(-1, -1, -1)``.

    ``comp[g, f]`` holds the index of ``g.f``, or -1 when undefined.
    """
    comp = np.ascontiguousarray(comp, dtype=np.int64)
    if comp.size == 0:
        return np.full(3, -1, dtype=np.int64)
    if numba_enabled():
        return _first_nonassociative_nb(comp)
    return _first_nonassociative_np(comp)


# -- Horn-clause family search ---------------------------------------------

def _horn_models_py(free_bits, required, bodies, heads):
    k = free_bits.shape[0]
    total = 1 << k
    out = np.empty(total, dtype=np.int64)
    count = 0
    n_clauses = bodies.shape[0]
    for i in range(total):
        mask = required
        for j in range(k):
            if (i >> j) & 1:
                mask |= np.int64(1) << free_bits[j]
        good = True
        for c in range(n_clauses):
            body = bodies[c]
            if (mask & body) == body and not ((mask >> heads[c]) & 1):
                good = False
                break
        if good:
            out[count] = mask
            count += 1
    return out[:count]


_horn_models_nb = njit(_horn_models_py)


def _horn_models_np(free_bits, required, bodies, heads):
    k = free_bits.shape[0]
    total = 1 << k
    found = []
    one = np.int64(1)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        masks = np.full(idx.shape, required, dtype=np.int64)
        for j in range(k):
            masks |= ((idx >> j) & one) << free_bits[j]
        good = np.ones(idx.shape, dtype=bool)
        for body, head in zip(bodies, heads):
            fires = (masks & body) == body
            good &= ~fires | (((masks >> head) & one) == one)
        found.append(masks[good])
    if not found:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(found)


def horn_models(n_bits, clauses):
    """All bitmasks over ``n_bits`` candidates satisfying every clause.

    A clause is ``(body, head)``: a collection of candidate indices and one
    head index, read as "all of body present => head present". An empty body
    forces the head. Masks are returned in increasing order.
    """
    if n_bits > MAX_BITS:
        raise ValueError(f"at most {MAX_BITS} candidates supported, got {n_bits}")
    required = 0
    bodies, heads = [], []
    for body, head in clauses:
        body = frozenset(body)
        if not body:
            required |= 1 << head
        elif head not in body:
            bmask = 0
            for b in body:
                bmask |= 1 << b
            bodies.append(bmask)
            heads.append(head)
    # propagate unconditional heads so the search only varies free bits
    changed = True
    while changed:
        changed = False
        for bmask, head in zip(bodies, heads):
            if (required & bmask) == bmask and not (required >> head) & 1:
                required |= 1 << head
                changed = True
    free = np.array([i for i in range(n_bits) if not (required >> i) & 1], dtype=np.int64)
    bodies_arr = np.array(bodies, dtype=np.int64)
    heads_arr = np.array(heads, dtype=np.int64)
    if numba_enabled():
        return _horn_models_nb(free, np.int64(required), bodies_arr, heads_arr)
    return _horn_models_np(free, np.int64(required), bodies_arr, heads_arr)


def mask_members(mask):
    """Indices of the set bits of ``mask`` in increasing order."""
    mask = int(mask)
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out
