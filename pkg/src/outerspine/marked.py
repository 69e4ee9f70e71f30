"""Marked graphs: spine vertices, the right Out(F_n)-action, equivalence.

A marking is stored based: one closed reduced edge path per basis letter,
all at the basepoint. Spine-vertex equality quantifies over a free-homotopy
conjugator, so the basepoint itself carries no meaning here (the pointed
theory lives in retract_aut).
"""

from . import folding, graphs
from .words import (ReducedWord, CyclicWord, basis_word, reduce_letters,
                    simultaneous_conjugator)
from .graphs import (reduce_path, invert_path, canonical_circuit, map_path,
                     GraphError)


class MarkingError(ValueError):
    pass


class MarkedGraph:
    def __init__(self, graph, basepoint, marking, check=True):
        self.graph = graph
        self.basepoint = basepoint
        self.marking = tuple(tuple(p) for p in marking)
        self.rank = graph.rank
        if basepoint not in graph.vertices:
            raise MarkingError("basepoint not a vertex")
        if len(self.marking) != self.rank:
            raise MarkingError("need %d marking paths" % self.rank)
        for p in self.marking:
            end = graph.check_path(p, basepoint)
            if end != basepoint:
                raise MarkingError("marking path not closed at basepoint")
            if not graph.path_is_reduced(p):
                raise MarkingError("marking path not reduced")
        self._values = None
        if check:
            self.check_generates()

    # -- construction ------------------------------------------------------

    @staticmethod
    def rose_identity(n):
        g = graphs.rose(n)
        return MarkedGraph(g, 0, tuple((i,) for i in range(1, n + 1)), check=False)

    def with_marking(self, marking, basepoint=None):
        return MarkedGraph(self.graph, self.basepoint if basepoint is None else basepoint,
                           marking, check=False)

    # -- marking as an identification of pi_1 with F_n ----------------------

    def check_generates(self):
        """The marking images must generate pi_1: folding them over the edge
        alphabet has to reproduce the graph itself, base at basepoint."""
        folded = folding.fold_words(self.marking, track_history=False)
        self._check_folded_is_graph(folded)
        return True

    def _check_folded_is_graph(self, folded):
        if len(folded.edges) != len(self.graph.edges):
            raise MarkingError("marking images do not generate pi_1")
        labels = {}
        for eid, (o, t, lab) in folded.edges.items():
            if lab in labels:
                raise MarkingError("marking fold duplicated an edge")
            labels[lab] = (o, t)
        if set(labels) != set(self.graph.edges):
            raise MarkingError("marking fold missed edges")
        base_labels = {folded.label_of(d) for d in folded.directions(folded.base)}
        if base_labels != set(self.graph.directions(self.basepoint)):
            raise MarkingError("marking fold base mismatch")

    def inverse_marking_values(self):
        """Per-edge transfer words: closed paths at the basepoint map to their
        exact F_n elements. Cached."""
        if self._values is None:
            folded = folding.fold_words(self.marking, track_history=True)
            self._check_folded_is_graph(folded)
            vals = {}
            for eid, (o, t, lab) in folded.edges.items():
                vals[lab] = folded.dval(eid)
            self._values = vals
        return self._values

    def spanning_paths(self):
        """BFS tree paths from the basepoint to every vertex."""
        paths = {self.basepoint: ()}
        frontier = [self.basepoint]
        while frontier:
            nxt = []
            for v in frontier:
                for d in self.graph.directions(v):
                    h = self.graph.head(d)
                    if h not in paths:
                        paths[h] = paths[v] + (d,)
                        nxt.append(h)
            frontier = nxt
        return paths

    def path_to_word(self, path, at_vertex=None):
        """F_n element of a closed path (rebased to the basepoint if needed)."""
        vals = self.inverse_marking_values()
        if at_vertex is not None and at_vertex != self.basepoint:
            k = self.spanning_paths()[at_vertex]
            path = k + tuple(path) + invert_path(k)
        out = []
        for d in path:
            v = vals[abs(d)]
            out.extend(v if d > 0 else tuple(-a for a in reversed(v)))
        red, _ = reduce_letters(out)
        return ReducedWord(red, self.rank)

    # -- operations ---------------------------------------------------------

    def expand(self, letters):
        """Edge path of a word, read through the marking (closed at base)."""
        out = []
        for a in letters:
            p = self.marking[abs(a) - 1]
            out.extend(p if a > 0 else invert_path(p))
        red, _ = reduce_path(out)
        return red

    def act(self, phi):
        """Right action: new marking sends a_i to the expansion of phi(a_i)."""
        endo = getattr(phi, "endo", phi)
        if endo.rank != self.rank:
            raise MarkingError("rank mismatch")
        marking = tuple(self.expand(im.letters) for im in endo.images)
        return MarkedGraph(self.graph, self.basepoint, marking, check=False)

    def circuit_of(self, c):
        """Cyclically reduced circuit representing a conjugacy class."""
        if isinstance(c, CyclicWord):
            letters = c.letters
        else:
            letters = c.letters
        if not letters:
            raise MarkingError("trivial class has no circuit")
        return canonical_circuit(self.expand(letters))

    def collapse_marked(self, forest):
        target, cmap = graphs.collapse(self.graph, forest)
        marking = []
        for p in self.marking:
            q, _ = cmap.push_path(p)
            marking.append(q)
        return MarkedGraph(target, cmap.push_vertex(self.basepoint), marking,
                           check=False), cmap

    def rebase(self, new_base):
        if new_base == self.basepoint:
            return self
        k = self.spanning_paths()[new_base]
        marking = []
        for p in self.marking:
            q, _ = reduce_path(invert_path(k) + p + k)
            marking.append(q)
        return MarkedGraph(self.graph, new_base, marking, check=False)

    def natural_marked(self):
        """Merge valence-2 vertices away (rank-1 keeps its one-loop form)."""
        g = self.graph
        if self.rank == 1:
            return self
        if g.is_natural():
            return self
        me = self
        if g.valence(me.basepoint) == 2:
            target = next(v for v in sorted(g.vertices) if g.valence(v) >= 3)
            me = me.rebase(target)
        new_g, refinement, _ = graphs.natural_structure(me.graph,
                                                        protected=(me.basepoint,))
        marking = [graphs.rewrite_path_through_refinement(p, refinement)
                   for p in me.marking]
        out = MarkedGraph(new_g, me.basepoint, marking, check=False)
        if not new_g.is_natural():
            # basepoint survived at valence 2 inside a chain; rebase and redo
            return out.natural_marked()
        return out

    def natural_marked_with_chains(self):
        """natural_marked plus each natural edge's chain of old directed edges."""
        g = self.graph
        if self.rank == 1 or g.is_natural():
            return self, {eid: (eid,) for eid in g.edges}
        me = self
        if g.valence(me.basepoint) == 2:
            target = next(v for v in sorted(g.vertices) if g.valence(v) >= 3)
            me = me.rebase(target)
        new_g, refinement, _ = graphs.natural_structure(me.graph,
                                                        protected=(me.basepoint,))
        marking = [graphs.rewrite_path_through_refinement(p, refinement)
                   for p in me.marking]
        out = MarkedGraph(new_g, me.basepoint, marking, check=False)
        return out, {eid: tuple(chain) for eid, chain in refinement.items()}

    def blowup_marked(self, v, part1, part2):
        """Blow up a vertex along a direction bipartition, lifting marking."""
        g2, new_eid, (v1, v2), cmap = graphs.blow_up(self.graph, v, part1, part2)
        side = {d: 2 for d in part2}
        for d in part1:
            side[d] = 1

        def rewrite(path, closed_at):
            out = []
            if closed_at == v and path and side[path[0]] == 2:
                out.append(new_eid)
            for i, d in enumerate(path):
                out.append(d)
                nxt = path[i + 1] if i + 1 < len(path) else None
                if self.graph.head(d) == v and nxt is not None:
                    s_in = side[-d]
                    s_out = side[nxt]
                    if s_in == 1 and s_out == 2:
                        out.append(new_eid)
                    elif s_in == 2 and s_out == 1:
                        out.append(-new_eid)
            if closed_at == v and path and side[-path[-1]] == 2:
                out.append(-new_eid)
            red, _ = reduce_path(out)
            return red

        base = self.basepoint if self.basepoint != v else v1
        marking = [rewrite(p, self.basepoint) for p in self.marking]
        out = MarkedGraph(g2, base, marking, check=False)
        return out, new_eid, cmap


def equivalent(G1, G2):
    """Exact spine-vertex equality: a homeomorphism plus one free-homotopy
    conjugator aligning all marking images. Returns a witness or None."""
    if G1.rank != G2.rank:
        return None
    from .words import cyclic_reduce
    basis = tuple(basis_word(i, G1.rank) for i in range(1, G1.rank + 1))
    for vmap, emap in graphs.graph_isomorphisms(G1.graph, G2.graph):
        at = vmap[G1.basepoint]
        try:
            us = tuple(G2.path_to_word(map_path(emap, p), at_vertex=at)
                       for p in G1.marking)
        except (KeyError, GraphError):
            continue
        # a common conjugator onto the basis needs every class to match
        if any(u.is_trivial() or cyclic_reduce(u)[0].letters != (i + 1,)
               for i, u in enumerate(us)):
            continue
        g = simultaneous_conjugator(us, basis)
        if g is not None:
            return vmap, emap, g
    return None


def invariant_key(G):
    """Cheap equivalence-invariant hash prefilter for spine bookkeeping:
    degree profile plus circuit lengths of short conjugacy classes. Cached."""
    cached = getattr(G, "_ikey", None)
    if cached is not None:
        return cached
    n = G.rank
    lens = []
    from itertools import product
    seen = set()
    for L in (1, 2, 3):
        for combo in product([a for i in range(1, n + 1) for a in (i, -i)], repeat=L):
            red = canonical_circuit_of_letters(combo)
            if red and len(red) == L and red not in seen:
                seen.add(red)
                lens.append(len(G.circuit_of(ReducedWord(red, n))))
    key = (G.graph.degree_profile(), tuple(sorted(lens)))
    G._ikey = key
    return key


def canonical_circuit_of_letters(letters):
    from .words import canonical_rotation
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return canonical_rotation(tuple(out))
