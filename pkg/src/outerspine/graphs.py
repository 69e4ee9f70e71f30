"""Finite core graphs, natural structure, forest collapses, blow-ups.

Vertices and edges are integer ids; a directed edge is +e or -e. An edge
path is a tuple of directed edges with matching endpoints.
"""

import itertools


class GraphError(ValueError):
    pass


class CoreGraph:
    """Connected finite graph, no valence-1 vertices. Immutable by convention."""

    def __init__(self, vertices, edges):
        self.vertices = frozenset(vertices)
        self.edges = dict(edges)  # eid -> (origin, terminus)
        for eid, (o, t) in self.edges.items():
            if o not in self.vertices or t not in self.vertices:
                raise GraphError("edge %r has unknown endpoint" % eid)
        self._out = {v: [] for v in self.vertices}
        for eid, (o, t) in self.edges.items():
            self._out[o].append(eid)
            self._out[t].append(-eid)
        if not self.is_connected():
            raise GraphError("graph not connected")
        for v in self.vertices:
            if self.valence(v) < 2:
                raise GraphError("valence-1 vertex %r (not a core graph)" % v)
        self.rank = len(self.edges) - len(self.vertices) + 1

    def head(self, d):
        o, t = self.edges[abs(d)]
        return t if d > 0 else o

    def tail(self, d):
        o, t = self.edges[abs(d)]
        return o if d > 0 else t

    def valence(self, v):
        return len(self._out[v])

    def directions(self, v):
        """Directed edges leaving v; a loop at v appears twice (+e and -e)."""
        return list(self._out[v])

    def is_loop(self, eid):
        o, t = self.edges[eid]
        return o == t

    def is_connected(self):
        if not self.vertices:
            return False
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for d in self._out[v]:
                h = self.head(d)
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen == self.vertices

    def is_circle(self):
        return all(self.valence(v) == 2 for v in self.vertices)

    def is_natural(self):
        """No valence-2 vertices (the rank-1 circle convention is separate)."""
        return all(self.valence(v) >= 3 for v in self.vertices)

    def check_path(self, path, start=None):
        cur = start
        for d in path:
            if abs(d) not in self.edges:
                raise GraphError("path uses unknown edge %r" % d)
            if cur is not None and self.tail(d) != cur:
                raise GraphError("path does not concatenate")
            cur = self.head(d)
        return cur

    def path_is_reduced(self, path):
        return all(x != -y for x, y in zip(path, path[1:]))

    def degree_profile(self):
        return tuple(sorted(self.valence(v) for v in self.vertices))


def reduce_path(path):
    """Cancel adjacent d, -d pairs; returns (tuple, #cancellations)."""
    out = []
    cancelled = 0
    for d in path:
        if out and out[-1] == -d:
            out.pop()
            cancelled += 1
        else:
            out.append(d)
    return tuple(out), cancelled


def invert_path(path):
    return tuple(-d for d in reversed(path))


def cyclic_reduce_path(path):
    """Rotate-and-cancel a closed path to cyclically reduced form."""
    p, _ = reduce_path(path)
    p = list(p)
    while len(p) >= 2 and p[0] == -p[-1]:
        p = p[1:-1]
    return tuple(p)


def canonical_circuit(path):
    """Canonical rotation of a cyclically reduced circuit."""
    p = cyclic_reduce_path(path)
    if not p:
        return ()
    return min(tuple(p[r:] + p[:r]) for r in range(len(p)))


def rose(rank, vertex=0):
    """The rank-n rose: loops 1..n at a single vertex."""
    return CoreGraph([vertex], {i: (vertex, vertex) for i in range(1, rank + 1)})


def theta_graph():
    """Two vertices joined by three parallel edges (rank 2)."""
    return CoreGraph([0, 1], {1: (0, 1), 2: (0, 1), 3: (0, 1)})


def is_forest(graph, edge_set):
    """True iff the edge subset contains no cycle (loops are cycles)."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in edge_set:
        o, t = graph.edges[eid]
        ro, rt = find(o), find(t)
        if ro == rt:
            return False
        parent[rt] = ro
    return True


def natural_structure(graph, protected=()):
    """Merge valence-2 chains away; returns (graph, refinement, vertex_keep).

    refinement maps each new edge id to the directed old-edge chain it
    replaces. Vertices in `protected` are kept even at valence 2 (used for
    basepoints). Rejects the circle (no natural structure).
    """
    keep = {v for v in graph.vertices if graph.valence(v) != 2 or v in protected}
    if not keep:
        raise GraphError("circle has no natural structure")
    refinement = {}
    edges = {}
    used = set()
    next_eid = 1
    for v in sorted(keep):
        for d in graph.directions(v):
            if abs(d) in used:
                continue
            # walk the chain starting with direction d until the next kept vertex
            chain = [d]
            cur = graph.head(d)
            while cur not in keep:
                outs = [x for x in graph.directions(cur) if x != -chain[-1]]
                assert len(outs) == 1
                chain.append(outs[0])
                cur = graph.head(outs[0])
            if any(abs(x) in used for x in chain):
                continue
            for x in chain:
                used.add(abs(x))
            edges[next_eid] = (v, cur)
            refinement[next_eid] = tuple(chain)
            next_eid += 1
    new_graph = CoreGraph(sorted(keep), edges)
    return new_graph, refinement, sorted(keep)


def refine_path_map(refinement):
    """Old-edge -> (new signed edge, position) lookup for path rewriting."""
    lookup = {}
    for new_eid, chain in refinement.items():
        for pos, d in enumerate(chain):
            lookup[d] = (new_eid, pos, len(chain))
            lookup[-d] = (-new_eid, len(chain) - 1 - pos, len(chain))
    return lookup


def rewrite_path_through_refinement(path, refinement):
    """Rewrite an old-graph path (endpoints at kept vertices) in new edges."""
    lookup = refine_path_map(refinement)
    out = []
    i = 0
    while i < len(path):
        new_d, pos, ln = lookup[path[i]]
        if pos != 0:
            raise GraphError("path does not start at a chain boundary")
        for j in range(ln):
            expect, p2, _ = lookup[path[i + j]]
            if expect != new_d or p2 != j:
                raise GraphError("path strays from chain")
        out.append(new_d)
        i += ln
    return tuple(out)


class CollapseMap:
    """Certificate of a forest collapse g -> g/E."""

    def __init__(self, source, target, forest, edge_map, vertex_map):
        self.source = source
        self.target = target
        self.forest = frozenset(forest)
        self.edge_map = dict(edge_map)      # surviving source eid -> target eid
        self.vertex_map = dict(vertex_map)  # source vertex -> target vertex
        for eid, (o, t) in source.edges.items():
            if eid in self.forest:
                if self.vertex_map[o] != self.vertex_map[t]:
                    raise GraphError("collapsed edge endpoints disagree")
            else:
                to, tt = target.edges[self.edge_map[eid]]
                if (self.vertex_map[o], self.vertex_map[t]) != (to, tt):
                    raise GraphError("edge bijection breaks incidence")

    def push_vertex(self, v):
        return self.vertex_map[v]

    def push_path(self, path):
        """Erase collapsed edges, rename the rest, re-reduce.

        Returns (path, erasure_was_enough) where the flag records whether
        erasure alone already produced a reduced path.
        """
        erased = []
        for d in path:
            if abs(d) in self.forest:
                continue
            erased.append(self.edge_map[abs(d)] if d > 0 else -self.edge_map[abs(d)])
        reduced, cancelled = reduce_path(erased)
        return reduced, cancelled == 0


def collapse(graph, forest_edges):
    """Collapse each component of a subforest to a point."""
    forest = frozenset(forest_edges)
    for eid in forest:
        if eid not in graph.edges:
            raise GraphError("unknown edge %r" % eid)
    if not is_forest(graph, forest):
        raise GraphError("edge set contains a cycle")
    parent = {v: v for v in graph.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in forest:
        o, t = graph.edges[eid]
        parent[find(t)] = find(o)
    vertex_map = {v: find(v) for v in graph.vertices}
    edges = {}
    edge_map = {}
    for eid, (o, t) in graph.edges.items():
        if eid in forest:
            continue
        edges[eid] = (vertex_map[o], vertex_map[t])
        edge_map[eid] = eid
    target = CoreGraph(sorted(set(vertex_map.values())), edges)
    return target, CollapseMap(graph, target, forest, edge_map, vertex_map)


def enumerate_natural_subforests(graph, include_empty=True):
    """All acyclic subsets of the (natural) edge set."""
    eids = sorted(graph.edges)
    out = []
    for r in range(0 if include_empty else 1, len(eids) + 1):
        for combo in itertools.combinations(eids, r):
            if is_forest(graph, combo):
                out.append(frozenset(combo))
    return out


def vertex_direction_bipartitions(graph, v):
    """Bipartitions of the directions at v into parts of size >= 2."""
    dirs = sorted(graph.directions(v), key=abs)
    n = len(dirs)
    if n < 4:
        return
    first = dirs[0]
    rest = dirs[1:]
    for r in range(1, n - 2 + 1):
        for combo in itertools.combinations(rest, r):
            part1 = (first,) + combo
            part2 = tuple(d for d in rest if d not in combo)
            if len(part1) >= 2 and len(part2) >= 2:
                yield part1, part2


def blow_up(graph, v, part1, part2, new_edge_hint=None):
    """Split v along a direction bipartition, inserting one new edge.

    Returns (new graph, new edge id, new vertex ids (v1, v2), collapse map
    back onto `graph`). Directions in part1 reattach to v1, part2 to v2;
    the new edge runs v1 -> v2.
    """
    new_eid = new_edge_hint or (max(graph.edges) + 1)
    v2 = max(graph.vertices) + 1
    v1 = v
    part2 = set(part2)
    edges = {}
    for eid, (o, t) in graph.edges.items():
        no, nt = o, t
        if o == v:
            no = v2 if +eid in part2 else v1
        if t == v:
            nt = v2 if -eid in part2 else v1
        edges[eid] = (no, nt)
    edges[new_eid] = (v1, v2)
    verts = set(graph.vertices) | {v2}
    g2 = CoreGraph(sorted(verts), edges)
    _, cmap = collapse(g2, [new_eid])
    # the collapse of the new edge recovers `graph` up to the vertex renaming
    return g2, new_eid, (v1, v2), cmap


def enumerate_blowups(graph):
    """All single-natural-edge blow-ups (g', {new edge}) with collapse back."""
    out = []
    for v in sorted(graph.vertices):
        for part1, part2 in vertex_direction_bipartitions(graph, v):
            g2, new_eid, _, cmap = blow_up(graph, v, part1, part2)
            out.append((g2, new_eid, cmap))
    return out


def graph_isomorphisms(g1, g2):
    """Yield all isomorphisms as (vertex_map, edge_map).

    edge_map sends each g1 edge id to a signed g2 edge id (orientation
    respected: +means origin->origin). Handles loops and parallel edges.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return
    if g1.degree_profile() != g2.degree_profile():
        return
    verts1 = sorted(g1.vertices, key=lambda v: (-g1.valence(v), v))
    verts2 = sorted(g2.vertices)

    def extend(vmap, used):
        if len(vmap) == len(verts1):
            yield dict(vmap)
            return
        v = verts1[len(vmap)]
        for w in verts2:
            if w in used:
                continue
            if g1.valence(v) != g2.valence(w):
                continue
            ok = True
            for u, x in vmap.items():
                n1 = _edge_count_between(g1, v, u)
                n2 = _edge_count_between(g2, w, x)
                if n1 != n2:
                    ok = False
                    break
            if ok:
                vmap[v] = w
                used.add(w)
                yield from extend(vmap, used)
                del vmap[v]
                used.discard(w)

    for vmap in extend({}, set()):
        yield from _edge_matchings(g1, g2, vmap)


def _edge_count_between(g, a, b):
    n = 0
    for o, t in g.edges.values():
        if {o, t} == {a, b} or (a == b and o == t == a):
            n += 1
    return n


def _edge_matchings(g1, g2, vmap):
    eids1 = sorted(g1.edges)

    def extend(emap, used):
        if len(emap) == len(eids1):
            yield dict(vmap), dict(emap)
            return
        eid = eids1[len(emap)]
        o, t = g1.edges[eid]
        for eid2, (o2, t2) in sorted(g2.edges.items()):
            if eid2 in used:
                continue
            if (o2, t2) == (vmap[o], vmap[t]):
                emap[eid] = eid2
                used.add(eid2)
                yield from extend(emap, used)
                del emap[eid]
                used.discard(eid2)
            # loops admit both orientations; non-loops at most one
            if (t2, o2) == (vmap[o], vmap[t]):
                emap[eid] = -eid2
                used.add(eid2)
                yield from extend(emap, used)
                del emap[eid]
                used.discard(eid2)

    yield from extend({}, set())


def graphs_isomorphic(g1, g2):
    return next(graph_isomorphisms(g1, g2), None) is not None


def map_path(emap, path):
    out = []
    for d in path:
        m = emap[abs(d)]
        out.append(m if d > 0 else -m)
    return tuple(out)
