import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from outerspine.words import (ReducedWord, CyclicWord, Endomorphism, WordError,
                              word, basis_word, cyclic_reduce,
                              primitive_root, is_automorphism,
                              simultaneous_conjugator, canonical_rotation)


def rand_letters(rng, rank, n):
    out = []
    for _ in range(n):
        a = rng.choice([i for i in range(1, rank + 1)] +
                       [-i for i in range(1, rank + 1)])
        out.append(a)
    return out


letters_st = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


def test_reduce_basic():
    assert word([1, -1], 3).letters == ()
    assert word([1, 2, -2, 3], 3).letters == (1, 3)
    # positive substitution concatenations stay reduced
    assert word([1, 2, 1], 3).letters == (1, 2, 1)


def test_reduce_rejects_out_of_range():
    with pytest.raises(WordError):
        word([4], 3)
    with pytest.raises(WordError):
        word([0], 3)


@given(letters_st)
@settings(max_examples=200, deadline=None)
def test_reduce_idempotent_and_inverse_cancels(ls):
    w = word(ls, 3)
    assert word(w.letters, 3) == w
    assert (w * w.inverse()).is_trivial()


def test_cyclic_reduce_examples():
    c, conj = cyclic_reduce(word([1, 2, -1], 3))
    assert c.letters == (2,)
    assert conj.letters == (1,)
    c, conj = cyclic_reduce(word([3, 1, 2], 3))
    assert c == CyclicWord.of(word([3, 1, 2], 3))
    assert conj * c.representative() * conj.inverse() == word([3, 1, 2], 3)
    # postcondition w = conj . cyc . conj^-1, brute-checked
    w = word([-2, 1, 2, 2], 3)
    c, conj = cyclic_reduce(w)
    assert conj * c.representative() * conj.inverse() == w
    assert c.letters == (1, 2)  # canonical rotation of the length-2 core


@given(letters_st.filter(lambda ls: any(ls)))
@settings(max_examples=200, deadline=None)
def test_cyclic_reduce_postcondition(ls):
    w = word(ls, 3)
    if w.is_trivial():
        return
    c, conj = cyclic_reduce(w)
    assert conj * c.representative() * conj.inverse() == w
    n = len(c.letters)
    for i in range(n):
        assert c.letters[i] != -c.letters[(i + 1) % n]
    assert c.letters == canonical_rotation(c.letters)


def theta_endo(n, m):
    images = []
    for i in range(1, n + 1):
        if i == 1:
            images.append([1, m])
        elif i <= m:
            images.append([i - 1])
        else:
            images.append([i])
    return Endomorphism.from_lists(images, n)


def test_apply_theta():
    th = theta_endo(3, 2)
    assert th.apply(basis_word(1, 3)).letters == (1, 2)
    assert Endomorphism.identity(3).apply(word([1, -2], 3)) == word([1, -2], 3)
    w = basis_word(1, 3)
    for _ in range(3):
        w = th.apply(w)
    assert w.letters == (1, 2, 1, 1, 2)


def test_compose():
    th = theta_endo(3, 2)
    psi = Endomorphism.from_lists([[2], [-2, 1], [3]], 3)
    assert th.compose(psi).is_identity()
    assert psi.compose(th).is_identity()
    ident = Endomorphism.identity(3)
    assert ident.compose(th) == th


@given(st.integers(0, 10000))
@settings(max_examples=60, deadline=None)
def test_apply_respects_composition(seed):
    rng = random.Random(seed)
    n = 3
    f = Endomorphism.from_lists([rand_letters(rng, n, rng.randint(1, 3))
                                 for _ in range(n)], n)
    g = Endomorphism.from_lists([rand_letters(rng, n, rng.randint(1, 3))
                                 for _ in range(n)], n)
    w = word(rand_letters(rng, n, 5), n)
    assert f.compose(g).apply(w) == f.apply(g.apply(w))


def test_is_automorphism():
    th = theta_endo(3, 2)
    auto = is_automorphism(th)
    assert auto is not None
    assert auto.endo.compose(auto.inverse_endo).is_identity()
    bad = Endomorphism.from_lists([[1, 2], [1, 2], [3]], 3)
    assert is_automorphism(bad) is None
    phi1 = Endomorphism.from_lists([[1], [2], [3, 1, 2]], 3)
    auto = is_automorphism(phi1)
    assert auto is not None
    assert auto.inverse_endo.images[2] == word([3, -2, -1], 3)


def test_is_automorphism_non_surjective():
    sub = Endomorphism.from_lists([[1], [2], [1, 2]], 3)
    assert is_automorphism(sub) is None
    # injective but not surjective (image is a proper free factor's mate)
    sq = Endomorphism.from_lists([[1, 1], [2], [3]], 3)
    assert is_automorphism(sq) is None


@given(st.integers(0, 10000))
@settings(max_examples=40, deadline=None)
def test_random_token_autos_invert(seed):
    rng = random.Random(seed)
    n = 3
    endo = Endomorphism.identity(n)
    for _ in range(rng.randint(1, 5)):
        kind = rng.choice(["L", "R", "inv"])
        i = rng.randint(1, n)
        j = rng.choice([x for x in range(1, n + 1) if x != i])
        if kind == "L":
            imgs = [list(im.letters) for im in Endomorphism.identity(n).images]
            imgs[i - 1] = [j] + imgs[i - 1]
        elif kind == "R":
            imgs = [list(im.letters) for im in Endomorphism.identity(n).images]
            imgs[i - 1] = imgs[i - 1] + [j]
        else:
            imgs = [list(im.letters) for im in Endomorphism.identity(n).images]
            imgs[i - 1] = [-i]
        endo = Endomorphism.from_lists(imgs, n).compose(endo)
    auto = is_automorphism(endo)
    assert auto is not None
    assert auto.endo.compose(auto.inverse_endo).is_identity()
    assert auto.inverse_endo.compose(auto.endo).is_identity()


def brute_force_conjugator(us, vs, max_len):
    rank = us[0].rank
    alphabet = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    for L in range(max_len + 1):
        for combo in itertools.product(alphabet, repeat=L):
            if any(combo[i] == -combo[i + 1] for i in range(L - 1)):
                continue
            g = ReducedWord(tuple(combo), rank)
            if all(u.conjugate_by(g) == v for u, v in zip(us, vs)):
                return g
    return None


def test_simultaneous_conjugator_examples():
    u = (word([1, 2], 2),)
    v = (word([2, 1], 2),)
    g = simultaneous_conjugator(u, v)
    assert g is not None
    assert u[0].conjugate_by(g) == v[0]
    us = (basis_word(1, 2), basis_word(2, 2))
    assert simultaneous_conjugator(us, us).is_trivial() or \
        all(u.conjugate_by(simultaneous_conjugator(us, us)) == u for u in us)
    assert simultaneous_conjugator(
        (basis_word(1, 2), basis_word(2, 2)),
        (basis_word(2, 2), basis_word(1, 2))) is None


@given(st.integers(0, 20000))
@settings(max_examples=250, deadline=None)
def test_simultaneous_conjugator_vs_brute_force(seed):
    rng = random.Random(seed)
    rank = 2
    us = tuple(word(rand_letters(rng, rank, rng.randint(1, 3)), rank)
               for _ in range(2))
    if all(u.is_trivial() for u in us):
        return
    g = word(rand_letters(rng, rank, rng.randint(0, 2)), rank)
    if rng.random() < 0.5:
        vs = tuple(u.conjugate_by(g) for u in us)
    else:
        vs = tuple(word(rand_letters(rng, rank, rng.randint(1, 3)), rank)
                   for _ in range(2))
    found = simultaneous_conjugator(us, vs)
    brute = brute_force_conjugator(us, vs, 5)
    if brute is not None:
        assert found is not None
        assert all(u.conjugate_by(found) == v for u, v in zip(us, vs))
    if found is not None and len(found) <= 5:
        assert brute is not None


def test_primitive_root():
    w = word([1, 2, 1, 2], 2)
    z = primitive_root(w)
    assert z == word([1, 2], 2)
    w = word([2, 1, 1, -2], 2)
    z = primitive_root(w)
    assert z * z == w
