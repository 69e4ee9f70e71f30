"""Subgroup graphs over a marked graph, free factor systems, CVK^F membership.

A subgroup graph is the Stallings core of the cover associated to a finitely
generated subgroup: a finite graph immersed over the ambient marked graph by
edge labels. It equals the quotient of the minimal subtree of the universal
cover; tree-level statements about minimal subtrees are computed on it.
"""

import itertools
from dataclasses import dataclass

from . import folding
from .folding import LabeledGraph, FoldError
from .marked import MarkedGraph
from .graphs import invert_path


class CoverError(ValueError):
    pass


class SubgroupGraph:
    """Core form (optionally with basepoint data: attach vertex + trim tail).

    `core` is a LabeledGraph whose labels are ambient edge ids. In based
    form, `tail_labels` is the hanging arc from the ambient basepoint lift to
    the core (the nearest-point arc), and `attach` its core endpoint.
    """

    def __init__(self, core, ambient, attach=None, tail_labels=None):
        self.core = core
        self.ambient = ambient
        self.attach = attach
        self.tail_labels = tuple(tail_labels) if tail_labels is not None else None
        self.rank = core.rank

    def is_based(self):
        return self.attach is not None

    def unbased(self):
        return SubgroupGraph(self.core, self.ambient)

    def vertex_image(self, v):
        """Ambient vertex under the immersion."""
        d = self.core.directions(v)[0]
        lab = self.core.label_of(d)
        return self.ambient.graph.tail(lab)

    def label_path(self, path):
        return self.core.path_labels(path)


def stallings_core(gens, G, based=False):
    """Fold the marking images of the generators over G's edge alphabet."""
    paths = [G.expand(w.letters) for w in gens]
    paths = [p for p in paths if p]
    if not paths:
        raise CoverError("trivial subgroup has no core")
    folded = folding.fold_words(paths)
    if based:
        core, tail, q, _based_graph = folded.based_core_and_tail()
        return SubgroupGraph(core, G, attach=q,
                             tail_labels=[folded.label_of(d) for d in tail])
    core = folded.pruned()
    if not core.edges:
        raise CoverError("trivial subgroup has no core")
    return SubgroupGraph(LabeledGraph(core.edges, None, core.vals), G)


def _labeled_extension(K1, K2, v1, v2):
    """Forced label-preserving morphism K1 -> K2 seeded v1 -> v2, or None."""
    vmap = {v1: v2}
    emap = {}
    stack = [v1]
    while stack:
        a = stack.pop()
        for d in K1.directions(a):
            lab = K1.label_of(d)
            d2 = K2.step(vmap[a], lab)
            if d2 is None:
                return None
            h1, h2 = K1.head(d), K2.head(d2)
            if h1 in vmap:
                if vmap[h1] != h2:
                    return None
            else:
                vmap[h1] = h2
                stack.append(h1)
            e1, e2 = abs(d), abs(d2)
            if e1 in emap and emap[e1] != e2:
                return None
            emap[e1] = e2
    return vmap, emap


def labeled_isomorphism(K1, K2):
    """Label-preserving isomorphism of core graphs (immersion rigidity:
    one seed determines everything). Returns (vmap, emap) or None."""
    if len(K1.edges) != len(K2.edges) or len(K1.vertices) != len(K2.vertices):
        return None
    if sorted(l for _, _, l in K1.edges.values()) != \
       sorted(l for _, _, l in K2.edges.values()):
        return None
    v1 = min(K1.vertices)
    for v2 in K2.vertices:
        ext = _labeled_extension(K1, K2, v1, v2)
        if ext is None:
            continue
        vmap, emap = ext
        if len(set(vmap.values())) == len(K2.vertices) and \
           len(set(emap.values())) == len(K2.edges):
            return vmap, emap
    return None


def conjugate_into(K1, K2):
    """Subgroup-of-K1 conjugate into subgroup-of-K2: a label-preserving
    morphism of cores (automatically an immersion, lands in the core)."""
    v1 = min(K1.vertices)
    for v2 in K2.vertices:
        ext = _labeled_extension(K1, K2, v1, v2)
        if ext is not None:
            return ext
    return None


def subgroups_conjugate(A, B):
    if A.ambient is not B.ambient:
        raise CoverError("subgroup graphs over different marked graphs")
    return labeled_isomorphism(A.core, B.core) is not None


def subgroup_generators(sub, G):
    """Free generators of the subgroup, read off a spanning tree of the core.

    Based form gives exact elements; unbased gives a conjugacy representative.
    """
    core = sub.core
    root = sub.attach if sub.attach is not None else min(core.vertices)
    tree_path = {root: ()}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for d in core.directions(v):
                h = core.head(d)
                if h not in tree_path:
                    tree_path[h] = tree_path[v] + (d,)
                    nxt.append(h)
        frontier = nxt
    tree_edges = set()
    for p in tree_path.values():
        for d in p:
            tree_edges.add(abs(d))
    pre = tuple(sub.tail_labels) if sub.tail_labels else ()
    gens = []
    for eid in sorted(core.edges):
        if eid in tree_edges:
            continue
        o, t, _ = core.edges[eid]
        loop = tree_path[o] + (eid,) + invert_path(tree_path[t])
        labels = pre + core.path_labels(loop) + tuple(-l for l in reversed(pre))
        at = G.basepoint if sub.tail_labels is not None else sub.vertex_image(root)
        gens.append(G.path_to_word(labels, at_vertex=at))
    return gens


@dataclass(frozen=True)
class FreeFactorSystem:
    """Conjugacy classes of free factors, stored by generating words."""

    components: tuple  # tuple of tuples of ReducedWord
    rank: int

    def __post_init__(self):
        if not self.components:
            raise CoverError("empty free factor system")

    @staticmethod
    def of(list_of_gen_lists, rank):
        return FreeFactorSystem(tuple(tuple(g) for g in list_of_gen_lists), rank)

    def cores_over(self, G):
        return [stallings_core(gens, G) for gens in self.components]

    def component_ranks(self, G=None):
        G = G or MarkedGraph.rose_identity(self.rank)
        return [k.rank for k in self.cores_over(G)]

    def coindex(self):
        ranks = self.component_ranks()
        if any(r < 1 for r in ranks):
            raise CoverError("trivial component in free factor system")
        if sum(r - 1 for r in ranks) > self.rank - 1:
            raise CoverError("component ranks exceed ambient rank")
        return (self.rank - 1) - sum(r - 1 for r in ranks)


def coindex(F):
    return F.coindex()


def ffs_partial_order(F1, F2):
    """F1 sqsubset F2: every component conjugate into a component of F2."""
    if F1.rank != F2.rank:
        raise CoverError("ambient rank mismatch")
    G = MarkedGraph.rose_identity(F1.rank)
    cores1 = F1.cores_over(G)
    cores2 = F2.cores_over(G)
    for K1 in cores1:
        if not any(conjugate_into(K1.core, K2.core) for K2 in cores2):
            return False
    return True


@dataclass
class CoreSubgraphWitness:
    edges: frozenset          # ambient edge ids forming the core subgraph
    components: tuple         # tuple of frozensets, one per component
    matching: tuple           # component index -> system component index


def subgraph_components(G, edge_set):
    """Connected components of an edge subset, as edge-id frozensets."""
    edge_set = set(edge_set)
    comps = []
    remaining = set(edge_set)
    while remaining:
        seed = next(iter(remaining))
        comp = {seed}
        verts = set(G.graph.edges[seed])
        changed = True
        while changed:
            changed = False
            for eid in list(remaining - comp):
                o, t = G.graph.edges[eid]
                if o in verts or t in verts:
                    comp.add(eid)
                    verts.update((o, t))
                    changed = True
        comps.append(frozenset(comp))
        remaining -= comp
    return comps


def core_prune_edges(G, edge_set):
    """Prune the subgraph to core form (drop valence-1 business iteratively)."""
    edge_set = set(edge_set)
    while True:
        deg = {}
        for eid in edge_set:
            o, t = G.graph.edges[eid]
            deg[o] = deg.get(o, 0) + 1
            deg[t] = deg.get(t, 0) + 1
        bad = {v for v, d in deg.items() if d == 1}
        if not bad:
            return frozenset(edge_set)
        edge_set = {eid for eid in edge_set
                    if not set(G.graph.edges[eid]) & bad}


def component_as_labeled(G, comp_edges):
    """A core subgraph component as a subgroup graph (identity labels)."""
    edges = {eid: (G.graph.edges[eid][0], G.graph.edges[eid][1], eid)
             for eid in comp_edges}
    return SubgroupGraph(LabeledGraph(edges, None), G)


def realizes(G, F):
    """CVK^F membership: search all core subgraphs of G for one whose
    components realize the system, component-by-component up to conjugacy."""
    cores = F.cores_over(G)
    target_ranks = sorted(k.rank for k in cores)
    eids = sorted(G.graph.edges)
    seen = set()
    for r in range(1, len(eids) + 1):
        for combo in itertools.combinations(eids, r):
            pruned = core_prune_edges(G, combo)
            if not pruned or pruned in seen:
                continue
            seen.add(pruned)
            comps = subgraph_components(G, pruned)
            if len(comps) != len(cores):
                continue
            labeled = [component_as_labeled(G, c) for c in comps]
            if sorted(k.rank for k in labeled) != target_ranks:
                continue
            match = _match_components(labeled, cores)
            if match is not None:
                return CoreSubgraphWitness(pruned, tuple(comps), tuple(match))
    return None


def _match_components(labeled, cores):
    n = len(cores)
    for perm in itertools.permutations(range(n)):
        if all(labeled_isomorphism(labeled[i].core, cores[perm[i]].core)
               for i in range(n)):
            return perm
    return None


def collapse_labeled(K, forest_labels, edge_map):
    """Collapse the label-preimage of a collapsed ambient forest, relabel
    surviving edges through the collapse bijection."""
    forest = {eid for eid, (o, t, lab) in K.edges.items() if lab in forest_labels}
    parent = {v: v for v in K.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in forest:
        o, t, _ = K.edges[eid]
        if find(o) == find(t):
            raise CoverError("label preimage of forest contains a cycle")
        parent[find(t)] = find(o)
    edges = {}
    for eid, (o, t, lab) in K.edges.items():
        if eid in forest:
            continue
        edges[eid] = (find(o), find(t), edge_map[lab])
    return LabeledGraph(edges, None)


def minimal_subtree_collapse_check(G, forest, gens):
    """Core-of-collapse equals collapse-of-core (minimal subtrees commute
    with forest collapses, at quotient level)."""
    G2, cmap = G.collapse_marked(forest)
    direct = stallings_core(gens, G2)
    K = stallings_core(gens, G)
    try:
        pushed = collapse_labeled(K.core, set(forest), cmap.edge_map)
    except (CoverError, FoldError):
        return False
    return labeled_isomorphism(pushed, direct.core) is not None
