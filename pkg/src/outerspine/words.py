"""Exact free-group kernel: reduced words, cyclic words, endomorphisms.

Letters are nonzero signed integers: +i is the i-th basis letter, -i its
inverse (so the rank-n alphabet is {-n..-1, 1..n}).
"""

from dataclasses import dataclass, field
from fractions import Fraction


class WordError(ValueError):
    pass


def check_letters(letters, rank):
    for a in letters:
        if a == 0 or abs(a) > rank:
            raise WordError("letter %r out of range for rank %d" % (a, rank))


def reduce_letters(letters):
    """Freely reduce a letter sequence; returns (tuple, #cancelled pairs)."""
    out = []
    cancelled = 0
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
            cancelled += 1
        else:
            out.append(a)
    return tuple(out), cancelled


def invert_letters(letters):
    return tuple(-a for a in reversed(letters))


@dataclass(frozen=True)
class ReducedWord:
    """A freely reduced word in F_rank. Immutable value object."""

    letters: tuple
    rank: int

    def __post_init__(self):
        check_letters(self.letters, self.rank)
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise WordError("word %r is not freely reduced" % (self.letters,))

    @staticmethod
    def make(letters, rank):
        """Reduce an arbitrary letter sequence."""
        red, _ = reduce_letters(letters)
        return ReducedWord(red, rank)

    def __len__(self):
        return len(self.letters)

    def is_trivial(self):
        return not self.letters

    def inverse(self):
        return ReducedWord(invert_letters(self.letters), self.rank)

    def __mul__(self, other):
        if self.rank != other.rank:
            raise WordError("rank mismatch")
        return ReducedWord.make(self.letters + other.letters, self.rank)

    def conjugate_by(self, g):
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        w = ReducedWord((), self.rank)
        for _ in range(k):
            w = w * self
        return w


def word(letters, rank):
    return ReducedWord.make(tuple(letters), rank)


def basis_word(i, rank):
    return ReducedWord((i,), rank)


def identity_word(rank):
    return ReducedWord((), rank)


def canonical_rotation(letters):
    """Lexicographically least rotation (tuple order on signed ints)."""
    if not letters:
        return ()
    return min(tuple(letters[r:] + letters[:r]) for r in range(len(letters)))


@dataclass(frozen=True)
class CyclicWord:
    """A conjugacy class: cyclically reduced letters in canonical rotation."""

    letters: tuple
    rank: int

    def __post_init__(self):
        check_letters(self.letters, self.rank)
        n = len(self.letters)
        for i in range(n):
            if self.letters[i] == -self.letters[(i + 1) % n]:
                raise WordError("not cyclically reduced: %r" % (self.letters,))
        if self.letters != canonical_rotation(self.letters):
            raise WordError("not in canonical rotation: %r" % (self.letters,))

    @staticmethod
    def of(w):
        cyc, _ = cyclic_reduce(w)
        return cyc

    def __len__(self):
        return len(self.letters)

    def representative(self):
        return ReducedWord(self.letters, self.rank)

    def inverse_class(self):
        return CyclicWord(canonical_rotation(invert_letters(self.letters)), self.rank)


def cyclic_reduce(w):
    """Split w as conj * cyc * conj^-1 with cyc cyclically reduced, canonical.

    Raises on the trivial word (it has no cyclic representative).
    """
    if w.is_trivial():
        raise WordError("trivial word has no cyclic reduction")
    letters = list(w.letters)
    prefix = []
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        prefix.append(letters[0])
        letters = letters[1:-1]
    core = tuple(letters)
    canon = canonical_rotation(core)
    # core = rot_prefix * canon * rot_prefix^-1 for the rotation offset used
    for r in range(len(core)):
        if core[r:] + core[:r] == canon:
            rot_prefix = core[:r]
            break
    conj = ReducedWord.make(tuple(prefix) + rot_prefix, w.rank)
    return CyclicWord(canon, w.rank), conj


def primitive_root(w):
    """Least z with w = z^k (k >= 1); the centralizer of w is <z>."""
    if w.is_trivial():
        raise WordError("trivial word has no primitive root")
    cyc, conj = cyclic_reduce(w)
    c = cyc.letters
    n = len(c)
    for p in range(1, n + 1):
        if n % p == 0 and c == c[:p] * (n // p):
            seed = ReducedWord(c[:p], w.rank)
            # transport the root back through the conjugation: w = conj c conj^-1
            return conj * seed * conj.inverse()
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Endomorphism:
    """A map of F_rank given by the images of basis letters."""

    rank: int
    images: tuple  # one ReducedWord per basis letter

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise WordError("need %d images, got %d" % (self.rank, len(self.images)))
        for im in self.images:
            if im.rank != self.rank:
                raise WordError("image rank mismatch")

    @staticmethod
    def from_lists(image_lists, rank):
        return Endomorphism(rank, tuple(word(l, rank) for l in image_lists))

    @staticmethod
    def identity(rank):
        return Endomorphism(rank, tuple(basis_word(i, rank) for i in range(1, rank + 1)))

    def image_of_letter(self, a):
        im = self.images[abs(a) - 1]
        return im if a > 0 else im.inverse()

    def apply(self, w):
        if w.rank != self.rank:
            raise WordError("rank mismatch")
        out = []
        for a in w.letters:
            out.extend(self.image_of_letter(a).letters)
        red, _ = reduce_letters(out)
        return ReducedWord(red, self.rank)

    def apply_counting_cancellation(self, w):
        """Apply, also reporting how many letter pairs cancelled.

        Zero cancellation is the train-track positivity certificate for the
        substitution maps used by the distortion witnesses.
        """
        out = []
        for a in w.letters:
            out.extend(self.image_of_letter(a).letters)
        red, cancelled = reduce_letters(out)
        return ReducedWord(red, self.rank), cancelled

    def apply_cyclic(self, c):
        """Image of a conjugacy class."""
        im = self.apply(c.representative())
        if im.is_trivial():
            raise WordError("image of conjugacy class collapsed (map not injective)")
        return CyclicWord.of(im)

    def compose(self, other):
        """self o other: apply other first."""
        if self.rank != other.rank:
            raise WordError("rank mismatch")
        return Endomorphism(self.rank, tuple(self.apply(im) for im in other.images))

    def is_identity(self):
        return all(im.letters == (i + 1,) for i, im in enumerate(self.images))

    def abelianization(self):
        """Integer matrix: column i = exponent vector of the image of a_i."""
        n = self.rank
        mat = [[0] * n for _ in range(n)]
        for i, im in enumerate(self.images):
            for a in im.letters:
                mat[abs(a) - 1][i] += 1 if a > 0 else -1
        return mat


def compose(f, g):
    return f.compose(g)


def _det(mat):
    """Exact determinant (fraction-free would be overkill at this size)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True)
class Automorphism:
    """A verified-invertible endomorphism with its inverse."""

    endo: Endomorphism
    inverse_endo: Endomorphism = field(compare=False)

    def __post_init__(self):
        if not self.endo.compose(self.inverse_endo).is_identity():
            raise WordError("stored inverse fails to invert")
        if not self.inverse_endo.compose(self.endo).is_identity():
            raise WordError("stored inverse fails to invert")

    @property
    def rank(self):
        return self.endo.rank

    @property
    def images(self):
        return self.endo.images

    def apply(self, w):
        return self.endo.apply(w)

    def apply_cyclic(self, c):
        return self.endo.apply_cyclic(c)

    def inverse(self):
        return Automorphism(self.inverse_endo, self.endo)

    def compose(self, other):
        return Automorphism(self.endo.compose(other.endo),
                            other.inverse_endo.compose(self.inverse_endo))


def is_automorphism(f):
    """Decide invertibility of f; return the Automorphism or None.

    The decision folds the wedge of image loops: the images generate F_n
    freely iff the folded graph is the rank-n rose with each basis letter on
    exactly one petal. The abelianization determinant is used only as a fast
    reject. The inverse is read off a second, history-tracked fold.
    """
    from . import folding

    if abs(_det(f.abelianization())) != 1:
        return None
    gr = folding.fold_words([im.letters for im in f.images], track_history=False)
    if not folding.is_full_rose(gr, f.rank):
        return None
    gr = folding.fold_words([im.letters for im in f.images], track_history=True)
    inv_images = folding.rose_petal_values(gr, f.rank)
    inv = Endomorphism(f.rank, tuple(ReducedWord.make(v, f.rank) for v in inv_images))
    return Automorphism(f, inv)


def simultaneous_conjugator(us, vs):
    """Find g with g^-1 u_i g = v_i for all i, or None.

    Exact: solutions for the pivot pair form the coset <z> g0 (z the
    primitive root of the pivot). Any solution satisfies
    |g| <= (|u_i| + |v_i|) / 2 for every nontrivial pair, which bounds the
    exponent sweep; powers are built incrementally.
    """
    if len(us) != len(vs):
        raise WordError("tuple length mismatch")
    if not us:
        raise WordError("empty tuples")
    pairs = list(zip(us, vs))
    pivot = None
    for u, v in pairs:
        if u.is_trivial() != v.is_trivial():
            return None
        if u.is_trivial():
            continue
        cu, _ = cyclic_reduce(u)
        cv, _ = cyclic_reduce(v)
        if cu != cv:
            return None
        if pivot is None:
            pivot = (u, v)
    if pivot is None:
        raise WordError("all-trivial left tuple")
    u0, v0 = pivot
    _, alpha = cyclic_reduce(u0)
    _, beta = cyclic_reduce(v0)
    g0 = alpha * beta.inverse()
    z = primitive_root(u0)
    rest = [(u, v) for u, v in pairs if (u, v) is not pivot]

    def works(g):
        return all(u.conjugate_by(g) == v for u, v in rest) and \
            u0.conjugate_by(g) == v0

    # pairs not commuting with z pin |t| well inside this; if all pairs
    # commute, t = 0 already works when anything does
    bound = 2 * sum(len(u) + len(v) for u, v in pairs) + 4
    if works(g0):
        return g0
    pos = g0
    neg = g0
    zinv = z.inverse()
    for _ in range(bound):
        pos = z * pos
        if works(pos):
            return pos
        neg = zinv * neg
        if works(neg):
            return neg
    return None
