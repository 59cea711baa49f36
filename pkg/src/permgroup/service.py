import itertools
import logging
import threading

from cachetools import LRUCache, cached
from pydantic import ValidationError

from ..exceptions import (
    CapExceededError,
    NonPermissibleError,
    ParseError,
    PostconditionError,
    SizeMismatchError,
)
from .model import Permutation, PermutationInfo, RankTable, ReducedWord

MAX_REDUCED_WORD_N = 7
MAX_PERMUTATION_N = 64


def parse_permutation(text: str) -> Permutation:
    """Accepts "[2,3,1]" or bare "2,3,1"."""
    stripped = text.strip().removeprefix("[").removesuffix("]")
    try:
        images = tuple(int(part) for part in stripped.split(",") if part.strip())
        if len(images) > MAX_PERMUTATION_N:
            raise CapExceededError(f"Permutations are limited to n <= {MAX_PERMUTATION_N}")
        return Permutation(images=images)
    except (ValueError, ValidationError) as e:
        raise ParseError(f"Invalid permutation '{text}': {e}")


def identity(n: int) -> Permutation:
    return Permutation(images=tuple(range(1, n + 1)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a o b)(k) = a(b(k))."""
    if a.n != b.n:
        raise SizeMismatchError(f"Cannot compose elements of S_{a.n} and S_{b.n}")
    return Permutation(images=tuple(a(b(k)) for k in range(1, a.n + 1)))


def length(w: Permutation) -> int:
    """Number of inversions."""
    images = w.images
    return sum(
        1 for a in range(w.n) for b in range(a + 1, w.n) if images[a] > images[b]
    )


def right_multiply_simple(w: Permutation, i: int) -> Permutation:
    """w * s_i: swaps the entries in positions i and i + 1."""
    if not 1 <= i < w.n:
        raise SizeMismatchError(f"s_{i} is not a simple transposition of S_{w.n}")
    images = list(w.images)
    images[i - 1], images[i] = images[i], images[i - 1]
    return Permutation(images=tuple(images))


def simple_transposition(i: int, n: int) -> Permutation:
    return right_multiply_simple(identity(n), i)


def multiply_word(word: tuple[int, ...], n: int) -> Permutation:
    """s_{i1} s_{i2} ... s_{il} in S_n."""
    w = identity(n)
    for i in word:
        w = right_multiply_simple(w, i)
    return w


def right_descents(w: Permutation) -> list[int]:
    return [i for i in range(1, w.n) if w(i) > w(i + 1)]


_words_cache: LRUCache = LRUCache(maxsize=8192)


@cached(cache=_words_cache, lock=threading.Lock())
def _reduced_words(images: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    w = Permutation(images=images)
    descents = right_descents(w)
    if not descents:
        return frozenset({()})
    words: set[tuple[int, ...]] = set()
    for i in descents:
        shorter = right_multiply_simple(w, i)
        words.update(word + (i,) for word in _reduced_words(shorter.images))
    return frozenset(words)


def all_reduced_words(w: Permutation) -> list[ReducedWord]:
    """Every minimal decomposition of w, sorted lexicographically."""
    if w.n > MAX_REDUCED_WORD_N:
        raise CapExceededError(
            f"Reduced-word enumeration is limited to n <= {MAX_REDUCED_WORD_N}"
        )
    words = sorted(_reduced_words(w.images))
    logging.debug(f"{len(words)} reduced words for {w}")
    return [ReducedWord(word=word, target=w) for word in words]


def reduced_word(w: Permutation) -> ReducedWord:
    """Lexicographically smallest reduced word, built greedily from the left."""
    word: list[int] = []
    # w = s_{i1} v with l(v) = l(w) - 1 iff i1 is a left descent of w
    current = w
    while not current.is_identity():
        inverse = current.inverse()
        i = next(k for k in range(1, w.n) if inverse(k) > inverse(k + 1))
        word.append(i)
        current = compose(simple_transposition(i, w.n), current)
    return ReducedWord(word=tuple(word), target=w)


def longest_element(n: int) -> Permutation:
    return Permutation(images=tuple(range(n, 0, -1)))


def embed(w: Permutation, m: int) -> Permutation:
    """Canonical inclusion S_n -> S_m fixing the points above n."""
    if m < w.n:
        raise SizeMismatchError(f"Cannot embed S_{w.n} into S_{m}")
    return Permutation(images=w.images + tuple(range(w.n + 1, m + 1)))


def all_permutations(n: int) -> list[Permutation]:
    """S_n sorted by (length, one-line images)."""
    perms = [Permutation(images=p) for p in itertools.permutations(range(1, n + 1))]
    return sorted(perms, key=lambda p: (length(p), p.images))


def rank_table(w: Permutation) -> RankTable:
    n = w.n
    rows = []
    for i in range(1, n + 1):
        row = []
        count = 0
        for j in range(1, n + 1):
            if w(j) <= i:
                count += 1
            row.append(count)
        rows.append(tuple(row))
    return RankTable(n=n, r=tuple(rows))


def essential_set(w: Permutation) -> set[tuple[int, int]]:
    """
    Essential cells in the coordinates of rank_table: (i, j) is essential when
    w^-1(i) > j, w^-1(i+1) <= j, w(j) > i and w(j+1) <= i. These are the corner
    cells whose rank conditions imply all the others.
    """
    v = w.inverse()
    n = w.n
    return {
        (i, j)
        for i in range(1, n)
        for j in range(1, n)
        if v(i) > j and v(i + 1) <= j and w(j) > i and w(j + 1) <= i
    }


def single_condition_permutation(e: int, f: int, l: int) -> Permutation:
    """The permutation of S_{e+f-l} whose only rank condition is r(e, f) <= l."""
    if e < 1 or f < 1 or l < 0:
        raise SizeMismatchError("e and f must be positive and l non-negative")
    if l > min(e, f):
        raise SizeMismatchError(f"l = {l} exceeds min(e, f) = {min(e, f)}")
    images = (
        list(range(1, l + 1))
        + list(range(e + 1, e + f - l + 1))
        + list(range(l + 1, e + 1))
    )
    w = Permutation(images=tuple(images))
    expected = {(e, f)} if l < min(e, f) else set()
    if essential_set(w) != expected:
        raise PostconditionError(f"Essential set of {w} is not {expected}")
    if rank_table(w).at(e, f) != l:
        raise PostconditionError(f"r({e},{f}) of {w} is not {l}")
    return w


def permutation_from_rank_table(table: RankTable) -> Permutation:
    """Recovers w from r_w; raises NonPermissibleError if no permutation produces the table."""
    n = table.n
    images = []
    for j in range(1, n + 1):
        column = [table.at(i, j) - (table.at(i, j - 1) if j > 1 else 0) for i in range(1, n + 1)]
        jumps = [i for i in range(1, n + 1) if column[i - 1] == 1 and (i == 1 or column[i - 2] == 0)]
        if len(jumps) != 1:
            raise NonPermissibleError(f"Column {j} of the table has no single new point")
        images.append(jumps[0])
    try:
        w = Permutation(images=tuple(images))
    except ValidationError:
        raise NonPermissibleError("Rank table does not come from a permutation")
    if rank_table(w) != table:
        raise NonPermissibleError("Rank table does not come from a permutation")
    return w


def describe(w: Permutation) -> PermutationInfo:
    table = rank_table(w)
    return PermutationInfo(
        permutation=str(w),
        length=length(w),
        reduced_words=[str(word) for word in all_reduced_words(w)],
        rank_table=[list(row) for row in table.r],
        essential_set=sorted(essential_set(w)),
    )
