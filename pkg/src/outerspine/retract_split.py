"""One-edge free splittings: blueprint data, membership via tight
semiconjugacy shape, and the ray-based retraction onto the subcomplex.

All computation happens at quotient level: the vertex-group cores play the
role of the minimal subtrees, and the eventually periodic rays pick the
attachment points exactly.
"""

from dataclasses import dataclass

from . import folding
from .words import (ReducedWord, Endomorphism, basis_word, identity_word,
                    cyclic_reduce, is_automorphism)
from .graphs import CoreGraph, reduce_path, invert_path
from .marked import MarkedGraph, equivalent
from .covers import FreeFactorSystem, realizes


class SplitError(ValueError):
    pass


class InvalidRay(SplitError):
    """The ray's ideal endpoint lies in the boundary of the vertex group."""


@dataclass(frozen=True)
class SplittingBlueprint:
    kind: str            # "loop" | "segment"
    vertex_gens: tuple   # one tuple of ReducedWord per labeled vertex
    stable: int          # basis letter index of the stable letter (loop only)
    rank: int

    def __post_init__(self):
        n = self.rank
        if self.kind == "loop":
            if len(self.vertex_gens) != 1 or len(self.vertex_gens[0]) != n - 1:
                raise SplitError("loop blueprint needs one rank n-1 vertex group")
        elif self.kind == "segment":
            if len(self.vertex_gens) != 2:
                raise SplitError("segment blueprint needs two vertex groups")
            if len(self.vertex_gens[0]) + len(self.vertex_gens[1]) != n:
                raise SplitError("segment vertex ranks must sum to n")
            if min(len(g) for g in self.vertex_gens) < 1:
                raise SplitError("trivial vertex group")
        else:
            raise SplitError("unknown splitting kind %r" % self.kind)
        if is_automorphism(Endomorphism(n, tuple(self.x_tuple()))) is None:
            raise SplitError("vertex groups do not freely decompose F_n")

    def x_tuple(self):
        if self.kind == "loop":
            return list(self.vertex_gens[0]) + [basis_word(self.stable, self.rank)]
        return list(self.vertex_gens[0]) + list(self.vertex_gens[1])

    def vertex_system(self):
        return FreeFactorSystem.of([[w for w in gens] for gens in self.vertex_gens],
                                   self.rank)


@dataclass(frozen=True)
class RayDatum:
    prefix: ReducedWord
    period: ReducedWord

    def __post_init__(self):
        if self.period.is_trivial():
            raise SplitError("ray period must be nontrivial")

    def reduced_form(self):
        """(W, Z): the ideal point as the reduced infinite word W Z Z Z..."""
        cyc, conj = cyclic_reduce(self.period)
        w = list((self.prefix * conj).letters)
        z = list(cyc.letters)
        guard = len(w) + len(z) + 1
        while w and w[-1] == -z[0] and guard:
            w.pop()
            z = z[1:] + z[:1]
            guard -= 1
        return tuple(w), tuple(z)


def default_retraction_data(bp):
    n = bp.rank
    if bp.kind == "loop":
        t = basis_word(bp.stable, n)
        rays = (RayDatum(identity_word(n), t),
                RayDatum(identity_word(n), t.inverse()))
    else:
        rays = (RayDatum(identity_word(n), bp.vertex_gens[1][0]),
                RayDatum(identity_word(n), bp.vertex_gens[0][0]))
    return RetractionData(bp, rays)


@dataclass(frozen=True)
class RetractionData:
    blueprint: object
    rays: tuple   # loop: (toward stable, toward inverse); segment: per vertex

    def __post_init__(self):
        if len(self.rays) != 2:
            raise SplitError("one-edge splittings carry two directed co-edge ends")


def coindex1_to_splitting(F):
    """Blueprint of the one-edge splitting determined by a coindex-1 system."""
    if F.coindex() != 1:
        raise SplitError("free factor system must have coindex 1")
    ranks = F.component_ranks()
    n = F.rank
    if len(F.components) == 1 and ranks[0] == n - 1:
        for t in range(n, 0, -1):
            try:
                return SplittingBlueprint("loop", (tuple(F.components[0]),), t, n)
            except SplitError:
                continue
        raise SplitError("no basis letter complements the vertex group")
    if len(F.components) == 2 and sum(ranks) == n:
        return SplittingBlueprint("segment",
                                  (tuple(F.components[0]), tuple(F.components[1])),
                                  0, n)
    raise SplitError("coindex-1 system is neither loop nor segment shaped")


def in_CVKT(G, bp):
    """Membership in the splitting subcomplex: the vertex system is realized
    and its complement is a single natural edge with matching incidence.

    Returns (witness, complement edge) or None.
    """
    w = realizes(G, bp.vertex_system())
    if w is None:
        return None
    comp = set(G.graph.edges) - set(w.edges)
    if len(comp) != 1:
        return None
    eid = next(iter(comp))
    o, t = G.graph.edges[eid]
    comp_verts = [set().union(*({G.graph.edges[e][0], G.graph.edges[e][1]}
                                for e in c)) for c in w.components]
    if bp.kind == "loop":
        if not any(o in cv and t in cv for cv in comp_verts):
            return None
    else:
        hit_o = next((i for i, cv in enumerate(comp_verts) if o in cv), None)
        hit_t = next((i for i, cv in enumerate(comp_verts) if t in cv), None)
        if hit_o is None or hit_t is None or hit_o == hit_t:
            return None
    return w, eid


class _BasedCover:
    """Based core data for one vertex group: fold of its generators over G."""

    def __init__(self, gens, G):
        paths = [G.expand(w.letters) for w in gens]
        if not any(paths):
            raise SplitError("trivial vertex group")
        folded = folding.fold_words([p for p in paths if p])
        core, tail, q, based = folded.based_core_and_tail()
        self.G = G
        self.core = core
        self.tail = tail
        self.q = q
        self.based = based
        self.base = folded.base
        self.gen_loops = []
        for p in paths:
            loop, end, consumed = based.trace(folded.base, p)
            if consumed != len(p) or end != folded.base:
                raise SplitError("generator loop strayed off the based core")
            red, _ = reduce_path(invert_path(tuple(tail)) + tuple(loop) + tuple(tail))
            assert all(abs(d) in core.edges for d in red)
            self.gen_loops.append(red)


def _ray_label_stream(ray, G):
    """Reduced infinite edge-label stream of the ray through G's marking.

    Expansions of consecutive letters can cancel across boundaries, so the
    head and the cyclic period are normalized at the edge level.
    """
    W, Z = ray.reduced_form()
    w_path = list(G.expand(W)) if W else []
    z_path = list(G.expand(Z))
    if not z_path:
        raise SplitError("ray period dies in the marking")
    pre = []
    while len(z_path) >= 2 and z_path[0] == -z_path[-1]:
        pre.append(z_path[0])
        z_path = z_path[1:-1]
    head, _ = reduce_path(tuple(w_path) + tuple(pre))
    head = list(head)
    guard = len(head) + len(z_path) + 1
    while head and head[-1] == -z_path[0] and guard:
        head.pop()
        z_path = z_path[1:] + z_path[:1]
        guard -= 1
    return head, z_path


def attach_point(cover, ray):
    """Trace the ray's reduced infinite word through the based cover.

    Returns (Q, alpha): the nearest core point to the ideal endpoint and the
    in-core path from the cover's base attachment q to Q. Errors out when
    the trace cycles (ideal point in the vertex group's boundary).
    """
    head, period = _ray_label_stream(ray, cover.G)
    based, core = cover.based, cover.core

    pos = cover.base
    alpha = []
    entered = False
    budget = len(head) + 2 * len(based.edges) * len(period) + len(period) + 4

    def stream():
        for a in head:
            yield a
        while True:
            for a in period:
                yield a

    states = set()
    consumed = 0
    for lab in stream():
        if budget <= 0:
            raise InvalidRay("ray stays in the vertex cover forever")
        budget -= 1
        d = based.step(pos, lab)
        in_core = d is not None and abs(d) in core.edges
        if d is None or (entered and not in_core):
            break
        if in_core:
            if not entered:
                assert based.tail(d) == cover.q, "core entry must be at q"
                entered = True
            alpha.append(d)
        pos = based.head(d)
        consumed += 1
        if consumed >= len(head):
            state = (pos, (consumed - len(head)) % len(period))
            if state in states:
                raise InvalidRay("ray stays in the vertex cover forever")
            states.add(state)
    if not entered:
        return cover.q, ()
    return pos, tuple(alpha)


def retract_R(G, data):
    """The retraction: vertex cores pulled apart, one fresh edge attached at
    the ray points, marking assembled from exact generator and stable paths."""
    bp = data.blueprint
    n = bp.rank
    auto = is_automorphism(Endomorphism(n, tuple(bp.x_tuple())))
    if auto is None:
        raise SplitError("blueprint degenerated")
    basis_exprs = auto.inverse_endo.images  # a_j as words in the x-alphabet

    if bp.kind == "loop":
        cover = _BasedCover(bp.vertex_gens[0], G)
        Q1, alpha1 = attach_point(cover, data.rays[0])
        Q2, alpha2 = attach_point(cover, data.rays[1])
        core = cover.core
        eps = max(core.edges) + 1
        edges = {eid: (o, t) for eid, (o, t, _) in core.edges.items()}
        edges[eps] = (Q1, Q2)
        graph = CoreGraph(sorted(core.vertices), edges)
        sigma, _ = reduce_path(tuple(alpha1) + (eps,) + invert_path(tuple(alpha2)))
        x_paths = list(cover.gen_loops) + [sigma]
        basept = cover.q
    else:
        cover0 = _BasedCover(bp.vertex_gens[0], G)
        cover1 = _BasedCover(bp.vertex_gens[1], G)
        Q0, alpha0 = attach_point(cover0, data.rays[0])
        Q1, alpha1 = attach_point(cover1, data.rays[1])
        # disjoint union: shift the second core's ids
        vshift = max(cover0.core.vertices) + 1
        eshift = max(cover0.core.edges) + 1
        edges = {eid: (o, t) for eid, (o, t, _) in cover0.core.edges.items()}
        for eid, (o, t, _) in cover1.core.edges.items():
            edges[eid + eshift] = (o + vshift, t + vshift)
        eps = max(edges) + 1
        edges[eps] = (Q0, Q1 + vshift)
        verts = sorted(cover0.core.vertices) + \
            [v + vshift for v in sorted(cover1.core.vertices)]
        graph = CoreGraph(verts, edges)

        def shift_path(p):
            return tuple(d + eshift if d > 0 else d - eshift for d in p)

        bridge, _ = reduce_path(tuple(alpha0) + (eps,) +
                                invert_path(shift_path(tuple(alpha1))))
        x_paths = list(cover0.gen_loops)
        for loop in cover1.gen_loops:
            conj, _ = reduce_path(bridge + shift_path(loop) + invert_path(bridge))
            x_paths.append(conj)
        basept = cover0.q

    marking = []
    for expr in basis_exprs:
        out = []
        for a in expr.letters:
            p = x_paths[abs(a) - 1]
            out.extend(p if a > 0 else invert_path(p))
        red, _ = reduce_path(out)
        marking.append(red)
    out = MarkedGraph(graph, basept, marking)
    return out.natural_marked()


def retraction_audit(G, forest, data):
    """Retract both ends of a collapse edge; certify distance 0 or 1.

    Both outputs are re-checked for membership in the subcomplex.
    """
    G2, _ = G.collapse_marked(forest)
    G2 = G2.natural_marked()
    r1 = retract_R(G, data)
    r2 = retract_R(G2, data)
    for r in (r1, r2):
        if in_CVKT(r, data.blueprint) is None:
            raise SplitError("retraction output left the subcomplex")
    if equivalent(r1, r2) is not None:
        return 0
    from .graphs import enumerate_natural_subforests
    for f in enumerate_natural_subforests(r1.graph, include_empty=False):
        cand, _ = r1.collapse_marked(f)
        if equivalent(cand.natural_marked(), r2) is not None:
            return 1
    raise SplitError("retractions are further than one collapse apart")
