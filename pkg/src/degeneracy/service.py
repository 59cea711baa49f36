import json
import logging
import random
from typing import Sequence

from pydantic import ValidationError

from ..exceptions import (
    NonPermissibleError,
    ParseError,
    PostconditionError,
    SizeMismatchError,
)
from ..permgroup.model import Permutation, RankTable
from ..permgroup.service import (
    embed,
    essential_set,
    length,
    permutation_from_rank_table,
    rank_table,
)
from .model import (
    ConditionSet,
    EssentialCheckReport,
    EssentialResponse,
    IntMatrix,
    SameRankReport,
)

ENTRY_RANGE = 9


def parse_matrix(text: str) -> IntMatrix:
    """JSON array of integer rows, e.g. "[[1,0],[0,0]]"."""
    try:
        rows = json.loads(text)
        return IntMatrix(rows=tuple(tuple(row) for row in rows))
    except (json.JSONDecodeError, TypeError, ValidationError) as e:
        raise ParseError(f"Invalid matrix '{text}': {e}")


def integer_rank(matrix: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination; every division is exact."""
    rows = matrix.rows if isinstance(matrix, IntMatrix) else matrix
    m = [list(row) for row in rows]
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    previous = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // previous
            m[r][col] = 0
        previous = m[rank][col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def corner_rank(matrix: IntMatrix, i: int, j: int) -> int:
    return integer_rank(matrix.corner(i, j))


def _cells(w: Permutation, which: ConditionSet) -> list[tuple[int, int]]:
    if which == ConditionSet.ESSENTIAL:
        return sorted(essential_set(w))
    return [(i, j) for i in range(1, w.n + 1) for j in range(1, w.n + 1)]


def satisfies_rank_conditions(
    matrix: IntMatrix, w: Permutation, which: ConditionSet = ConditionSet.ALL
) -> bool:
    """rank of every upper-left i x j block is at most r_w(i, j) over the chosen cells."""
    if matrix.n_rows != w.n or matrix.n_cols != w.n:
        raise SizeMismatchError(
            f"Matrix is {matrix.n_rows}x{matrix.n_cols}, permutation lives in S_{w.n}"
        )
    table = rank_table(w)
    return all(corner_rank(matrix, i, j) <= table.at(i, j) for i, j in _cells(w, which))


def corner_ranks(matrix: IntMatrix) -> list[list[int]]:
    return [
        [corner_rank(matrix, i, j) for j in range(1, matrix.n_cols + 1)]
        for i in range(1, matrix.n_rows + 1)
    ]


def permutation_matrix(w: Permutation, values: Sequence[int] | None = None) -> IntMatrix:
    """Dot of column k in row w(k); its corner ranks are exactly r_w."""
    rows = [[0] * w.n for _ in range(w.n)]
    for k in range(1, w.n + 1):
        rows[w(k) - 1][k - 1] = 1 if values is None else values[k - 1]
    return IntMatrix(rows=tuple(tuple(row) for row in rows))


def _nonzero(rng: random.Random) -> int:
    return rng.choice([v for v in range(-ENTRY_RANGE, ENTRY_RANGE + 1) if v])


def _mix(rows: list[list[int]], rng: random.Random) -> IntMatrix:
    """L * M * U with random unit lower and upper triangular L, U; corner ranks are kept."""
    n = len(rows)
    lower = [[0] * n for _ in range(n)]
    upper = [[0] * n for _ in range(n)]
    for a in range(n):
        lower[a][a] = upper[a][a] = 1
        for b in range(a):
            lower[a][b] = rng.randint(-ENTRY_RANGE, ENTRY_RANGE)
            upper[b][a] = rng.randint(-ENTRY_RANGE, ENTRY_RANGE)

    def product(a, b):
        return [[sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)] for r in range(n)]

    mixed = product(product(lower, rows), upper)
    return IntMatrix(rows=tuple(tuple(row) for row in mixed))


def _subpattern(w: Permutation, rng: random.Random) -> list[list[int]]:
    rows = [[0] * w.n for _ in range(w.n)]
    for k in range(1, w.n + 1):
        if rng.random() < 0.7:
            rows[w(k) - 1][k - 1] = _nonzero(rng)
    return rows


def _partial_permutation(n: int, rng: random.Random) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    columns = list(range(n))
    rng.shuffle(columns)
    for row, col in enumerate(columns[: rng.randint(0, n)]):
        rows[row][col] = _nonzero(rng)
    return rows


def _projected_generic(w: Permutation, rng: random.Random) -> list[list[int]]:
    """Generic entries, then each essential corner replaced by a random product of rank <= r."""
    n = w.n
    rows = [[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) for _ in range(n)] for _ in range(n)]
    table = rank_table(w)
    cells = sorted(essential_set(w))
    rng.shuffle(cells)
    for i, j in cells:
        r = table.at(i, j)
        left = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(i)]
        right = [[rng.randint(-3, 3) for _ in range(j)] for _ in range(r)]
        for a in range(i):
            for b in range(j):
                rows[a][b] = sum(left[a][k] * right[k][b] for k in range(r))
    return rows


def random_test_matrix(w: Permutation, rng: random.Random) -> tuple[IntMatrix, bool]:
    """
    A random n x n matrix satisfying the essential rank conditions of w. The
    flag is False when the sample fell back to a subpattern of w's dots, which
    satisfies every condition by construction.
    """
    if rng.random() < 0.5:
        candidate = _partial_permutation(w.n, rng)
    else:
        candidate = _projected_generic(w, rng)
    matrix = _mix(candidate, rng)
    if satisfies_rank_conditions(matrix, w, ConditionSet.ESSENTIAL):
        return matrix, True
    return _mix(_subpattern(w, rng), rng), False


def essential_sufficiency_check(
    w: Permutation, trials: int = 200, seed: int = 0
) -> EssentialCheckReport:
    """Samples matrices meeting the essential conditions and checks that every condition holds."""
    counterexamples: list[list[list[int]]] = []
    nontrivial = 0
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        matrix, sampled = random_test_matrix(w, rng)
        nontrivial += sampled
        if not satisfies_rank_conditions(matrix, w, ConditionSet.ALL):
            logging.error(f"Essential conditions of {w} do not imply all: {matrix.to_lists()}")
            counterexamples.append(matrix.to_lists())
    logging.info(
        f"Essential check for {w}: {trials} trials, {nontrivial} non-trivial, "
        f"{len(counterexamples)} counterexamples"
    )
    return EssentialCheckReport(
        permutation=str(w),
        trials=trials,
        seed=seed,
        essential_set=sorted(essential_set(w)),
        sampled_nontrivial=nontrivial,
        counterexamples=counterexamples,
    )


def _pad(block: IntMatrix, n: int) -> IntMatrix:
    rows = [list(row) + [0] * (n - block.n_cols) for row in block.rows]
    rows += [[0] * n for _ in range(n - block.n_rows)]
    return IntMatrix(rows=tuple(tuple(row) for row in rows))


def complete_rank_table(restriction: Sequence[Sequence[int]], n: int) -> RankTable:
    """
    The largest n x n rank table whose e x f corner is `restriction`:
    r(i, j) = min(i, j, r(a, b) + (i - a)^+ + (j - b)^+ over the corner cells).
    Raises NonPermissibleError when no permutation of S_n has that corner.
    """
    e = len(restriction)
    f = len(restriction[0]) if restriction else 0
    if any(len(row) != f for row in restriction):
        raise SizeMismatchError("Rank table rows must all have the same length")
    corner = [
        (a, b, restriction[a - 1][b - 1]) for a in range(1, e + 1) for b in range(1, f + 1)
    ]
    rows = tuple(
        tuple(
            min(
                [i, j]
                + [value + max(0, i - a) + max(0, j - b) for a, b, value in corner]
            )
            for j in range(1, n + 1)
        )
        for i in range(1, n + 1)
    )
    try:
        table = RankTable(n=n, r=rows)
    except ValidationError as e:
        raise NonPermissibleError(f"No permutation of S_{n} has this rank corner: {e}")
    if any(table.at(a, b) != value for a, b, value in corner):
        raise NonPermissibleError(
            f"Rank corner {[list(row) for row in restriction]} is not attained"
        )
    return table


def same_rank_embedding(
    e: int,
    f: int,
    n: int,
    table: RankTable | Sequence[Sequence[int]],
    trials: int = 20,
    seed: int = 0,
) -> SameRankReport:
    """
    Pads an e x f map with zeros to n x n. The conditions r(i, j) with i <= e
    and j <= f are inherited from the table; the others hold automatically,
    which is checked on random blocks. `table` is either the e x f corner
    r(i, j), i <= e, j <= f, completed by complete_rank_table, or a full
    n x n table whose entries outside the corner are taken as given.
    """
    if e < 1 or f < 1 or n < max(e, f):
        raise SizeMismatchError(f"Need 1 <= e, f <= n, got e={e}, f={f}, n={n}")
    if not isinstance(table, RankTable):
        if len(table) != e or any(len(row) != f for row in table):
            raise SizeMismatchError(f"Rank corner must be {e}x{f}")
        table = complete_rank_table(table, n)
    elif table.n != n:
        raise SizeMismatchError(f"Rank table is {table.n}x{table.n}, expected {n}x{n}")
    w = permutation_from_rank_table(table)
    inherited = [(i, j) for i in range(1, e + 1) for j in range(1, f + 1)]
    automatic = [
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > e or j > f
    ]
    passed = True
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        sample, _ = random_test_matrix(w, rng)
        padded = _pad(sample.corner(e, f), n)
        if not all(corner_rank(padded, i, j) <= table.at(i, j) for i, j in automatic):
            logging.error(f"Padding of {sample.corner(e, f).to_lists()} adds a condition")
            passed = False
    return SameRankReport(
        e=e,
        f=f,
        n=n,
        permutation=str(w),
        padded_rows=n - e,
        padded_cols=n - f,
        inherited=inherited,
        automatic=automatic,
        trials=trials,
        passed=passed,
    )


def id_reduction_permutation(w: Permutation) -> Permutation:
    """The image of w in S_{2n}; the reduction to an identity map keeps the essential set."""
    reduced = embed(w, 2 * w.n)
    if essential_set(reduced) != essential_set(w):
        raise PostconditionError(f"Embedding {w} into S_{2 * w.n} changed its essential set")
    return reduced


def expected_codimension(w: Permutation) -> int:
    return length(w)


def describe_essential(w: Permutation) -> EssentialResponse:
    table = rank_table(w)
    cells = sorted(essential_set(w))
    return EssentialResponse(
        permutation=str(w),
        essential_set=cells,
        rank_conditions={f"{i},{j}": table.at(i, j) for i, j in cells},
        expected_codimension=expected_codimension(w),
    )
