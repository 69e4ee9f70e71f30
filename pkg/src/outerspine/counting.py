"""The crossing-count i_{A,B}(c, G) and its Lipschitz/equivariance audits.

The count works at quotient level: K is the core of the B-cover of G, the
A-core(s) embed in K, and the complement determines the distinguished
crossing block E (a natural chain or loop, stored as simplicial directed
edges). The axis of c is traced through K as a periodic line; each maximal
stay is a path, and crossings are complete traversals of the block.
"""

from dataclasses import dataclass

from .covers import stallings_core, _labeled_extension
from .graphs import invert_path


class CountError(ValueError):
    pass


class ConjugateIntoB(CountError):
    """The traced class lives in B: the count is undefined."""


@dataclass
class CountingContext:
    G: object                # ambient MarkedGraph
    K: object                # LabeledGraph, core of the B-cover
    A_edge_sets: tuple       # frozenset of K-edge ids per embedded A-component
    A_vertex_sets: tuple
    block: tuple             # directed K-edges: the crossing block E
    shape: str               # "edge" | "loop" | "loop_at_core"

    @property
    def complement_edges(self):
        used = set().union(*self.A_edge_sets)
        return frozenset(self.K.edges) - used


def _injective_embeddings(KA, K):
    """All label-preserving embeddings of the core KA into K."""
    out = []
    v1 = min(KA.vertices)
    for v2 in sorted(K.vertices):
        ext = _labeled_extension(KA, K, v1, v2)
        if ext is None:
            continue
        vmap, emap = ext
        if len(set(vmap.values())) == len(KA.vertices) and \
           len(set(emap.values())) == len(KA.edges):
            out.append((frozenset(emap.values()), frozenset(vmap.values())))
    return out


def _classify_complement(K, a_edges, a_vertices, two_component):
    """Identify the crossing block in the complement, or None if the shape
    does not match the rank-difference-one dichotomy."""
    comp = set(K.edges) - set(a_edges)
    if not comp:
        return None
    cverts = set()
    for eid in comp:
        o, t, _ = K.edges[eid]
        cverts.update((o, t))
    free = cverts - set(a_vertices)
    if len(comp) - len(free) != 1:
        return None
    if not _edges_connected(K, comp):
        return None
    cyc = _cycle_part(K, comp)
    if two_component:
        if cyc:
            return None
        return _chain_block(K, comp, a_vertices)
    if not cyc:
        return _chain_block(K, comp, a_vertices)
    connector = comp - cyc
    # attachment vertex: where the connector (or the A-core) meets the cycle
    cyc_verts = set()
    for eid in cyc:
        o, t, _ = K.edges[eid]
        cyc_verts.update((o, t))
    if connector:
        deg = _degrees(K, comp)
        candidates = [v for v in cyc_verts if deg.get(v, 0) >= 3]
        if len(candidates) != 1:
            return None
        w = candidates[0]
        shape = "loop"
    else:
        candidates = [v for v in cyc_verts if v in a_vertices]
        if len(candidates) != 1:
            return None
        w = candidates[0]
        shape = "loop_at_core"
    block = _walk_cycle(K, cyc, w)
    return block, shape


def _degrees(K, edge_set):
    deg = {}
    for eid in edge_set:
        o, t, _ = K.edges[eid]
        deg[o] = deg.get(o, 0) + 1
        deg[t] = deg.get(t, 0) + 1
    return deg


def _edges_connected(K, edge_set):
    edge_set = set(edge_set)
    seed = next(iter(edge_set))
    comp = {seed}
    verts = set(K.edges[seed][:2])
    changed = True
    while changed:
        changed = False
        for eid in list(edge_set - comp):
            o, t, _ = K.edges[eid]
            if o in verts or t in verts:
                comp.add(eid)
                verts.update((o, t))
                changed = True
    return comp == edge_set


def _cycle_part(K, edge_set):
    """Edges on the unique cycle of the complement (empty if it is a tree)."""
    edges = set(edge_set)
    while True:
        deg = _degrees(K, edges)
        leaves = {v for v, d in deg.items() if d == 1}
        if not leaves:
            return edges
        nxt = {eid for eid in edges if not set(K.edges[eid][:2]) & leaves}
        if nxt == edges:
            return edges
        edges = nxt


def _chain_block(K, comp, a_vertices):
    deg = _degrees(K, comp)
    ends = sorted(v for v, d in deg.items() if d == 1)
    if len(ends) != 2 or any(v not in a_vertices for v in ends):
        return None
    start = ends[0]
    block = _walk_chain(K, comp, start)
    return block, "edge"


def _walk_chain(K, comp, start):
    block = []
    cur = start
    used = set()
    while True:
        outs = [d for d in K.directions(cur)
                if abs(d) in comp and abs(d) not in used]
        if not outs:
            break
        d = min(outs, key=lambda x: (abs(x), x < 0))
        block.append(d)
        used.add(abs(d))
        cur = K.head(d)
    assert len(used) == len(comp)
    return tuple(block)


def _walk_cycle(K, cyc, w):
    outs = [d for d in K.directions(w) if abs(d) in cyc]
    d0 = min(outs, key=lambda x: (abs(x), x < 0))
    block = [d0]
    used = {abs(d0)}
    cur = K.head(d0)
    while cur != w or len(used) < len(cyc):
        nxt = [d for d in K.directions(cur) if abs(d) in cyc and abs(d) not in used]
        if not nxt:
            break
        d = min(nxt, key=lambda x: (abs(x), x < 0))
        block.append(d)
        used.add(abs(d))
        cur = K.head(d)
    assert len(used) == len(cyc) and cur == w
    return tuple(block)


def build_context(A_gens_list, B_gens, G):
    """Counting context for one A (case 1) or two disjoint A's (case 2)."""
    K = stallings_core(B_gens, G).core
    two = len(A_gens_list) == 2
    A_cores = [stallings_core(gens, G).core for gens in A_gens_list]
    if two:
        if A_cores[0].rank + A_cores[1].rank != K.rank:
            raise CountError("rank(A_0) + rank(A_1) must equal rank(B)")
    else:
        if A_cores[0].rank + 1 != K.rank:
            raise CountError("rank(B) must exceed rank(A) by one")
    embeddings = [_injective_embeddings(KA, K) for KA in A_cores]
    for i, embs in enumerate(embeddings):
        if not embs:
            raise CountError("A-core %d does not embed in the B-core "
                             "(G not in CVK^[A])" % i)
    import itertools
    for choice in itertools.product(*embeddings):
        esets = [c[0] for c in choice]
        vsets = [c[1] for c in choice]
        if two and (esets[0] & esets[1] or vsets[0] & vsets[1]):
            continue
        res = _classify_complement(K, set().union(*esets),
                                   set().union(*vsets), two)
        if res is None:
            continue
        block, shape = res
        if two:
            ends = {K.tail(block[0]), K.head(block[-1])}
            if not (ends & vsets[0] and ends & vsets[1]):
                continue
        return CountingContext(G, K, tuple(esets), tuple(vsets), block, shape)
    raise CountError("complement shape matches neither rank-increment case")


@dataclass
class CrossingCount:
    value: int
    start: tuple  # maximizing (vertex, phase), diagnostic


def _count_block(mu, block):
    rev = invert_path(block)
    q = len(block)
    n = 0
    for i in range(len(mu) - q + 1):
        win = mu[i:i + q]
        if win == block or win == rev:
            n += 1
    return n


def count_i(ctx, c, G=None):
    """Maximum number of complete crossings of the block by the periodic
    trace of c through K, over all start positions and phases.

    A trace that cycles proves c conjugate into B, which is an error (the
    quantity is undefined there).
    """
    G = G or ctx.G
    circuit = G.circuit_of(c)
    if not circuit:
        raise CountError("trivial class")
    K = ctx.K
    L = len(circuit)
    states = [(v, p) for v in K.vertices for p in range(L)]

    def step(state):
        v, p = state
        d = K.step(v, circuit[p])
        if d is None:
            return None, None
        return d, (K.head(d), (p + 1) % L)

    # cycle detection over the partial deterministic transition
    color = {}
    for s in states:
        if s in color:
            continue
        path = []
        cur = s
        while cur is not None and color.get(cur) is None:
            color[cur] = 1
            path.append(cur)
            _, cur = step(cur)
        if cur is not None and color.get(cur) == 1:
            raise ConjugateIntoB("class is conjugate into B; count undefined")
        for x in path:
            color[x] = 2

    best = 0
    best_start = None
    for (v, p) in states:
        back = K.step(v, -circuit[(p - 1) % L])
        if back is not None:
            continue  # not an entry state
        mu = []
        cur = (v, p)
        budget = len(states) + 1
        while budget:
            d, nxt = step(cur)
            if d is None:
                break
            mu.append(d)
            cur = nxt
            budget -= 1
        assert budget, "entry-state run exceeded budget"
        score = _count_block(tuple(mu), ctx.block)
        if score > best or best_start is None:
            best = score
            best_start = (v, p)
    return CrossingCount(best, best_start)


def lipschitz_audit(A_gens_list, B_gens, G, forest, c, check_membership=False):
    """Counts before and after a forest collapse staying in CVK^[A].

    The harness asserts i_before <= i_after <= i_before + 2.
    """
    if check_membership:
        from .covers import realizes, FreeFactorSystem
        F = FreeFactorSystem.of([[w for w in gens] for gens in A_gens_list], G.rank)
        G2chk, _ = G.collapse_marked(forest)
        if realizes(G, F) is None or realizes(G2chk.natural_marked(), F) is None:
            raise CountError("collapse leaves CVK^[A]")
    ctx1 = build_context(A_gens_list, B_gens, G)
    G2, _ = G.collapse_marked(forest)
    G2 = G2.natural_marked()
    ctx2 = build_context(A_gens_list, B_gens, G2)
    i1 = count_i(ctx1, c).value
    i2 = count_i(ctx2, c).value
    return i1, i2
