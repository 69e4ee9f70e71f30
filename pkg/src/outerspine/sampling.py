"""Deterministic randomized instance generators for the audit suites.

Everything takes an explicit random.Random so suites are reproducible.
"""

from . import graphs
from .words import Endomorphism, ReducedWord, is_automorphism
from .marked import MarkedGraph
from .retract_aut import PointedMarkedGraph


def random_reduced_word(rng, rank, max_len, nontrivial=False):
    while True:
        ls = []
        for _ in range(rng.randint(0 if not nontrivial else 1, max_len)):
            choices = [i for i in range(1, rank + 1)] + \
                      [-i for i in range(1, rank + 1)]
            if ls:
                choices = [a for a in choices if a != -ls[-1]]
            ls.append(rng.choice(choices))
        w = ReducedWord(tuple(ls), rank)
        if not nontrivial or not w.is_trivial():
            return w


def transvection(n, i, j, side="R"):
    imgs = [[x] for x in range(1, n + 1)]
    imgs[i - 1] = [j, i] if side == "L" else [i, j]
    return is_automorphism(Endomorphism.from_lists(imgs, n))


def inversion(n, i):
    imgs = [[x] for x in range(1, n + 1)]
    imgs[i - 1] = [-i]
    return is_automorphism(Endomorphism.from_lists(imgs, n))


def random_token_auto(rng, n, moves):
    endo = Endomorphism.identity(n)
    for _ in range(moves):
        if rng.random() < 0.15:
            endo = inversion(n, rng.randint(1, n)).endo.compose(endo)
        else:
            i = rng.randint(1, n)
            j = rng.choice([x for x in range(1, n + 1) if x != i])
            endo = transvection(n, i, j,
                                rng.choice(["L", "R"])).endo.compose(endo)
    auto = is_automorphism(endo)
    assert auto is not None
    return auto


def random_stab_auto(rng, n, r, moves):
    """A random element of the stabilizer of [<a_1..a_r>] (as a product of
    block transvections/inversions that visibly preserve the factor)."""
    endo = Endomorphism.identity(n)
    for _ in range(moves):
        kind = rng.random()
        if kind < 0.35 and r >= 2:
            i = rng.randint(1, r)
            j = rng.choice([x for x in range(1, r + 1) if x != i])
            step = transvection(n, i, j, rng.choice(["L", "R"]))
        elif kind < 0.5:
            step = inversion(n, rng.randint(1, r))
        else:
            j = rng.randint(r + 1, n)
            i = rng.choice([x for x in range(1, n + 1) if x != j])
            step = transvection(n, j, i, rng.choice(["L", "R"]))
        endo = step.endo.compose(endo)
    auto = is_automorphism(endo)
    assert auto is not None
    return auto


def random_blowup(rng, G):
    cands = []
    for v in sorted(G.graph.vertices):
        for p1, p2 in graphs.vertex_direction_bipartitions(G.graph, v):
            cands.append((v, p1, p2))
    if not cands:
        return None
    v, p1, p2 = rng.choice(cands)
    out, _, _ = G.blowup_marked(v, p1, p2)
    return out


def random_marked_graph(rng, n, steps, act_moves=2):
    """Random spine vertex: start at the rose, blow up / collapse / act."""
    G = MarkedGraph.rose_identity(n)
    if act_moves:
        G = G.act(random_token_auto(rng, n, rng.randint(0, act_moves)))
    for _ in range(steps):
        roll = rng.random()
        if roll < 0.55:
            out = random_blowup(rng, G)
            if out is not None:
                G = out
        elif roll < 0.85:
            forests = [f for f in
                       graphs.enumerate_natural_subforests(G.graph) if f]
            if forests:
                H, _ = G.collapse_marked(rng.choice(forests))
                G = H.natural_marked()
        else:
            G = G.act(random_token_auto(rng, n, 1))
    return G.natural_marked()


def random_pointed_graph(rng, n, steps, act_moves=2):
    x = PointedMarkedGraph.pointed_rose(n)
    if act_moves:
        x = x.act(random_token_auto(rng, n, rng.randint(0, act_moves)))
    for _ in range(steps):
        roll = rng.random()
        if roll < 0.55:
            cands = []
            for v in sorted(x.graph.vertices):
                for p1, p2 in graphs.vertex_direction_bipartitions(x.graph, v):
                    cands.append((v, p1, p2))
            if cands:
                v, p1, p2 = rng.choice(cands)
                x, _, _ = x.blowup_pointed(v, p1, p2)
        elif roll < 0.85:
            forests = [f for f in
                       graphs.enumerate_natural_subforests(x.graph) if f]
            forests = [f for f in forests]
            if forests:
                x, _ = x.collapse_pointed(rng.choice(forests))
        else:
            x = x.act(random_token_auto(rng, n, 1))
    return x.relatively_natural()


def random_relatively_natural_forest(rng, x):
    forests = [f for f in graphs.enumerate_natural_subforests(x.graph) if f]
    if not forests:
        return None
    return rng.choice(forests)
