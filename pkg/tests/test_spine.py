import random

from outerspine import graphs
from outerspine.marked import MarkedGraph, equivalent
from outerspine.words import Endomorphism, basis_word, is_automorphism
from outerspine.covers import FreeFactorSystem
from outerspine.spine import neighbors, bfs_distance, fold_path


def transv(n, i, j, side="R"):
    imgs = [[x] for x in range(1, n + 1)]
    imgs[i - 1] = [j, i] if side == "L" else [i, j]
    return is_automorphism(Endomorphism.from_lists(imgs, n))


def theta_marked():
    g = graphs.theta_graph()
    return MarkedGraph(g, 0, [(1, -3), (2, -3)])


def test_neighbors_rose2():
    G = MarkedGraph.rose_identity(2)
    ns = neighbors(G)
    # no collapse neighbors (rose has no natural forest), 3 blow-ups,
    # some of which may coincide as spine vertices
    assert 1 <= len(ns) <= 3
    for h in ns:
        assert h.rank == 2
        assert any(equivalent(x, G) is not None for x in neighbors(h))


def test_neighbors_theta():
    T = theta_marked()
    ns = neighbors(T, dedupe=False)
    collapses = [h for h in ns if len(h.graph.edges) == 2]
    assert len(collapses) == 3  # one per theta edge


def test_neighbors_symmetric():
    G = MarkedGraph.rose_identity(2)
    for h in neighbors(G):
        assert any(equivalent(x, G) is not None for x in neighbors(h))


def test_bfs_distance_basics():
    G = MarkedGraph.rose_identity(2)
    T = theta_marked()
    assert bfs_distance(G, G, 3) == 0
    d = bfs_distance(G, T, 3)
    assert d == 1
    phi = transv(2, 1, 2)
    d2 = bfs_distance(G, G.act(phi), 6)
    assert d2 == 2


def test_bfs_metric_properties():
    G = MarkedGraph.rose_identity(2)
    phi = transv(2, 1, 2)
    H = G.act(phi)
    T = theta_marked()
    dGH = bfs_distance(G, H, 4)
    dHG = bfs_distance(H, G, 4)
    assert dGH == dHG
    dGT = bfs_distance(G, T, 4)
    dTH = bfs_distance(T, H, 4)
    assert dGH <= dGT + dTH


def test_bfs_isometry_of_action():
    G = MarkedGraph.rose_identity(2)
    phi = transv(2, 1, 2)
    psi = transv(2, 2, 1)
    d1 = bfs_distance(G, G.act(phi), 4)
    d2 = bfs_distance(G.act(psi), G.act(phi).act(psi)
                      if False else G.act(phi.compose(psi)), 4)
    # d(u psi, v psi) = d(u, v); compute via composed markings
    d2 = bfs_distance(G.act(psi), G.act(phi).act(psi), 4)
    assert d1 == d2


def test_fold_path_identity():
    G = MarkedGraph.rose_identity(2)
    p = fold_path(G, G)
    assert len(p) == 0
    p.verify()


def test_fold_path_single_transvection():
    G = MarkedGraph.rose_identity(2)
    H = G.act(transv(2, 1, 2))
    p = fold_path(G, H)
    p.verify()
    assert len(p) <= 4
    assert equivalent(p.vertices[0], G) is not None
    assert equivalent(p.vertices[-1], H) is not None
    d = bfs_distance(G, H, 6)
    assert d is not None and d <= len(p)


def test_fold_path_random_f3():
    rng = random.Random(41)
    G = MarkedGraph.rose_identity(3)
    done = 0
    for _ in range(12):
        endo = Endomorphism.identity(3)
        for _ in range(rng.randint(1, 4)):
            i = rng.randint(1, 3)
            j = rng.choice([x for x in range(1, 4) if x != i])
            endo = transv(3, i, j, rng.choice(["L", "R"])).endo.compose(endo)
        phi = is_automorphism(endo)
        H = G.act(phi)
        p = fold_path(G, H)
        p.verify()
        assert equivalent(p.vertices[-1], H) is not None
        done += 1
    assert done == 12


def test_fold_path_guarded():
    G = MarkedGraph.rose_identity(3)
    F = FreeFactorSystem.of([[basis_word(1, 3)]], 3)
    phi = transv(3, 2, 3)      # fixes a1: stays in CVK^F
    H = G.act(phi)
    p = fold_path(G, H, F=F)
    p.verify()
    assert p.guarded
    assert p.realize_flags and all(p.realize_flags)


def test_fold_path_guard_dropped_for_nonrose():
    T = theta_marked()
    G = MarkedGraph.rose_identity(2)
    F = FreeFactorSystem.of([[basis_word(1, 2)]], 2)
    p = fold_path(T, G, F=F)
    p.verify()
    assert not p.guarded
    assert "dropped" in p.guard_report
