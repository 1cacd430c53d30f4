"""Lattices up to isomorphism and random well-behaved operation tables."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from alba.errors import NotALattice
from alba.models.lattice import FiniteLE, Lattice, law_violations
from alba.syntax.signature import Connective, Pol, Signature

MAX_ENUMERATED_SIZE = 6


def _canonical_key(leq: np.ndarray) -> bytes:
    n = leq.shape[0]
    inner = list(range(1, n - 1))
    best = None
    for perm in itertools.permutations(inner):
        order = [0, *perm, n - 1] if n > 1 else [0]
        key = leq[np.ix_(order, order)].tobytes()
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def _lattices_of_size(n: int) -> tuple[Lattice, ...]:
    if n == 1:
        return (Lattice(np.ones((1, 1), dtype=bool), "L1_0"),)
    if n == 2:
        return (Lattice.chain(2),)
    inner = list(range(1, n - 1))
    pairs = [(a, b) for a, b in itertools.combinations(inner, 2)]
    seen: dict[bytes, Lattice] = {}
    for bits in itertools.product((False, True), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for (a, b), on in zip(pairs, bits):
            leq[a, b] = on
        # candidate relations are naturally labelled; keep only transitive ones
        closed = leq.copy()
        for k in range(n):
            closed |= np.outer(closed[:, k], closed[k, :])
        if not np.array_equal(closed, leq):
            continue
        try:
            lat = Lattice(leq)
        except NotALattice:
            continue
        key = _canonical_key(leq)
        if key not in seen:
            seen[key] = lat
    out = []
    for i, (_, lat) in enumerate(sorted(seen.items())):
        out.append(Lattice(lat.leq, f"L{n}_{i}"))
    return tuple(out)


def enumerate_lattices(max_size: int) -> list[Lattice]:
    """All lattices with at most ``max_size`` elements, one per isomorphism class."""
    if max_size > MAX_ENUMERATED_SIZE:
        raise ValueError(f"enumeration is supported up to size {MAX_ENUMERATED_SIZE}")
    return [lat for n in range(1, max_size + 1) for lat in _lattices_of_size(n)]


def _normal_table(lat: Lattice, conn: Connective, rng: np.random.Generator, density: float) -> np.ndarray:
    """``f(a) = join of h(x)`` over generator tuples ``x`` below ``a`` in the
    twisted product order (dually for G).  Preserves the required operations
    on distributive lattices; elsewhere it is only a candidate."""
    n, arity = lat.size, conn.arity
    use_ji, gens = [], []
    for i in range(1, arity + 1):
        one = conn.eps(i) is Pol.ONE
        use_ji.append(one if conn.is_f else not one)
        gens.append(lat.join_irreducibles if use_ji[-1] else lat.meet_irreducibles)
    gen_tuples = list(itertools.product(*gens))
    unit = lat.bot if conn.is_f else lat.top
    h = {x: (int(rng.integers(n)) if rng.random() < density else unit) for x in gen_tuples}
    table = np.empty((n,) * arity, dtype=np.intp)
    for a in itertools.product(range(n), repeat=arity):
        vals = []
        for x in gen_tuples:
            if all(lat.leq[xi, ai] if ji else lat.leq[ai, xi] for xi, ai, ji in zip(x, a, use_ji)):
                vals.append(h[x])
        table[a] = lat.join_all(vals) if conn.is_f else lat.meet_all(vals)
    return table


def random_table(lat: Lattice, conn: Connective, rng: np.random.Generator, tries: int = 12) -> np.ndarray:
    """A random table obeying the laws of ``conn`` on ``lat``.

    Falls back to the constant bound operation when random candidates keep
    failing (as they may on non-distributive lattices).
    """
    n = lat.size
    probe_sig = Signature([Connective(conn.name, conn.family, conn.arity, conn.order_type)])
    for attempt in range(tries):
        density = 0.7 if attempt < tries // 2 else 0.3
        if conn.arity == 0:
            table = np.array(rng.integers(n), dtype=np.intp)
        else:
            table = _normal_table(lat, conn, rng, density)
            if conn.is_regular:
                c = int(rng.integers(n))
                table = lat.join[c, table] if conn.is_f else lat.meet[c, table]
        m = FiniteLE(lat, probe_sig, {conn.name: table})
        if not law_violations(m):
            return table
    unit = lat.bot if conn.is_f else lat.top
    return np.full((n,) * conn.arity, unit, dtype=np.intp)


def random_model(lat: Lattice, sig: Signature, rng: np.random.Generator, name: str = "") -> FiniteLE:
    base = sig.base()
    ops = {c: random_table(lat, base[c], rng) for c in base}
    m = FiniteLE(lat, base, ops, name or lat.name)
    bad = law_violations(m)
    assert not bad, bad
    return m


def model_pool(
    sig: Signature, max_size: int = 4, per_lattice: int = 3, seed: int = 0, min_size: int = 1
) -> list[FiniteLE]:
    """Random models over every enumerated lattice with size in range."""
    rng = np.random.default_rng(seed)
    pool = []
    for lat in enumerate_lattices(max_size):
        if lat.size < min_size:
            continue
        for k in range(per_lattice):
            pool.append(random_model(lat, sig, rng, f"{lat.name}#{k}"))
    return pool
