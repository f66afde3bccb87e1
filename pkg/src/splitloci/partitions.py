"""Partitions, Pieri rules and Schur-basis products.

Partitions are tuples of weakly decreasing positive integers; () is the empty
partition.  The engine multiplies Schur classes through Jacobi-Trudi: a Schur
polynomial is a signed sum of products of complete homogeneous classes, and
multiplying by an h is a Pieri horizontal-strip sum.  That keeps the engine
free of any Littlewood-Richardson tableau machinery, which lives on the oracle
side (oracles.py) precisely so the two can check each other.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations


def is_partition(lam):
    return all(isinstance(p, int) and p > 0 for p in lam) and all(
        lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def make_partition(parts):
    """Normalize an iterable into a partition tuple (sorted, zeros dropped)."""
    t = tuple(sorted((int(p) for p in parts), reverse=True))
    while t and t[-1] == 0:
        t = t[:-1]
    if t and t[-1] < 0:
        raise ValueError(f"negative part in {parts}")
    return t


def weight(lam):
    return sum(lam)


def conjugate(lam):
    if not lam:
        return ()
    out = []
    for c in range(lam[0]):
        out.append(sum(1 for p in lam if p > c))
    return tuple(out)


def contains(lam, mu):
    """Whether the diagram of lam contains that of mu."""
    if len(mu) > len(lam):
        return False
    return all(lam[i] >= mu[i] for i in range(len(mu)))


def box_complement(lam, rows, cols):
    """Complement of lam inside the rows x cols rectangle.

    Requires lam to fit in the box; the complement is read upside down.
    """
    padded = tuple(lam) + (0,) * (rows - len(lam))
    if len(lam) > rows or (lam and lam[0] > cols):
        raise ValueError(f"{lam} does not fit in {rows}x{cols}")
    return make_partition(cols - p for p in padded)


def partitions_in_box(rows, cols, size=None):
    """All partitions with at most ``rows`` parts, each part <= cols.

    If size is given, only partitions of that weight.
    """
    out = []

    def rec(prefix, maxpart, total):
        if size is None or total == size:
            out.append(tuple(prefix))
        if len(prefix) >= rows:
            return
        for p in range(maxpart, 0, -1):
            if size is not None and total + p > size:
                continue
            prefix.append(p)
            rec(prefix, p, total + p)
            prefix.pop()

    rec([], cols, 0)
    if size is not None:
        out = [p for p in out if weight(p) == size]
    return out


@lru_cache(maxsize=200000)
def pieri_row(lam, t, max_rows, max_col=None):
    """Add a horizontal strip of size t to lam: the Pieri rule for h_t.

    Returns a tuple of partitions mu >= lam with mu/lam a horizontal strip of
    size t, at most max_rows rows, and (optionally) first part <= max_col.
    """
    if t == 0:
        return (lam,)
    results = []
    n = len(lam)
    rows = min(n + 1, max_rows)

    def rec(i, remaining, built):
        # cells added in row i must be <= lam[i-1] - lam[i] ... horizontal strip:
        # mu_i in [lam_i, lam_{i-1}] (mu_1 unbounded above or by max_col).
        if i == rows:
            if remaining == 0:
                results.append(tuple(p for p in built if p))
            return
        lo = lam[i] if i < n else 0
        hi = (lam[i - 1] if i > 0 else (max_col if max_col is not None else lo + remaining))
        hi = min(hi, lo + remaining)
        if max_col is not None and i == 0:
            hi = min(hi, max_col)
        # choose mu_i = lo..hi, spending mu_i - lo
        for mu_i in range(hi, lo - 1, -1):
            built.append(mu_i)
            rec(i + 1, remaining - (mu_i - lo), built)
            built.pop()

    rec(0, t, [])
    return tuple(results)


@lru_cache(maxsize=200000)
def pieri_col(lam, t, max_rows):
    """Add a vertical strip of size t to lam: the Pieri rule for e_t.

    At most one cell per row; results with more than max_rows rows vanish.
    """
    if len(lam) > max_rows:
        raise ValueError("partition has more rows than the ring allows")
    if t == 0:
        return (lam,)
    if t > max_rows:
        return ()
    results = []
    n = len(lam)

    def rec(i, remaining, built):
        if remaining == 0:
            tail = lam[i:] if i < n else ()
            results.append(tuple(p for p in tuple(built) + tuple(tail) if p))
            return
        if i >= max_rows:
            return
        lo = lam[i] if i < n else 0
        prev = built[i - 1] if i > 0 else None
        mu_i = lo + 1
        if prev is None or mu_i <= prev:
            built.append(mu_i)
            rec(i + 1, remaining - 1, built)
            built.pop()
        # leave the row untouched; once a row is empty no later row can gain
        if lo > 0:
            built.append(lo)
            rec(i + 1, remaining, built)
            built.pop()

    rec(0, t, [])
    return tuple(results)


def _jacobi_trudi_rows(nu):
    """Row index sequences (h-subscripts per permutation, sign) for s_nu.

    s_nu = det(h_{nu_i + j - i}) expands into sum over permutations sigma of
    sign(sigma) * prod_i h_{nu_i + sigma(i) - i}.  Returns tuples (sign, hs)
    with negative h-subscripts dropped (those terms vanish).
    """
    l = len(nu)
    out = []
    for sigma in permutations(range(l)):
        sign = 1
        seen = list(sigma)
        # parity via inversion count
        inv = sum(1 for a in range(l) for b in range(a + 1, l)
                  if seen[a] > seen[b])
        sign = -1 if inv % 2 else 1
        hs = []
        ok = True
        for i in range(l):
            sub = nu[i] + sigma[i] - i
            if sub < 0:
                ok = False
                break
            if sub > 0:
                hs.append(sub)
        if ok:
            out.append((sign, tuple(hs)))
    return out


@lru_cache(maxsize=500000)
def schur_times_schur(lam, nu, max_rows, max_col=None):
    """Expand s_lam * s_nu in the Schur basis of at-most-max_rows rows.

    Jacobi-Trudi on nu: signed iterated Pieri chains.  Returns a tuple of
    (partition, coefficient) pairs; coefficients are the LR numbers.
    """
    if not nu:
        return ((lam, 1),)
    acc = {}
    for sign, hs in _jacobi_trudi_rows(nu):
        layer = {lam: 1}
        for t in hs:
            nxt = {}
            for mu, c in layer.items():
                for rho in pieri_row(mu, t, max_rows, max_col):
                    nxt[rho] = nxt.get(rho, 0) + c
            layer = nxt
            if not layer:
                break
        for mu, c in layer.items():
            c0 = acc.get(mu, 0) + sign * c
            if c0:
                acc[mu] = c0
            elif mu in acc:
                del acc[mu]
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=500000)
def e_monomial_to_schur(exps, nvars):
    """Expand prod_i e_i^{exps[i-1]} (in nvars variables) in the Schur basis.

    exps is a tuple of exponents for e_1..e_len(exps).  Iterated column Pieri;
    all coefficients are nonnegative integers.  Partitions with more than
    nvars rows vanish.
    """
    layer = {(): 1}
    for i, e in enumerate(exps, start=1):
        for _ in range(e):
            nxt = {}
            for lam, c in layer.items():
                for mu in pieri_col(lam, i, nvars):
                    nxt[mu] = nxt.get(mu, 0) + c
            layer = nxt
            if not layer:
                return ()
    return tuple(sorted(layer.items()))


def pad(lam, rows):
    return tuple(lam) + (0,) * (rows - len(lam))
