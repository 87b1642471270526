"""Find an integer matrix N that makes a Fibonacci sequence symmetric.

For seeds ``(w0, w1)`` we look for N with ``w0 N``, ``w1 N^t`` and
``w1 w0 N`` symmetric. Each condition is one linear equation in the four
entries of N. When the 3x4 system has rank 3 its kernel is spanned by the
vector of signed 3x3 minors, which we arrange back into a 2x2 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .linalg import Mat2, content

# unknown ordering: (n11, n12, n21, n22)


class SymmetrizerError(ValueError):
    pass


class NotInV(SymmetrizerError):
    """The linear system has rank < 3."""


class NotInU(SymmetrizerError):
    """Rank 3, but the kernel matrix is singular."""


@dataclass(frozen=True)
class SeedPair:
    w0: Mat2
    w1: Mat2
    n: Optional[Mat2] = None
    admissible: bool = False
    reason: str = ""

    def __post_init__(self):
        if self.w0.det == 0 or self.w1.det == 0:
            raise ValueError("seed matrices must have non-zero determinant")


def _row_left(w: Mat2) -> List[int]:
    # (w N)_12 - (w N)_21
    return [-w.e21, w.e11, -w.e22, w.e12]


def _row_transposed(w: Mat2) -> List[int]:
    # (w N^t)_12 - (w N^t)_21
    return [-w.e21, -w.e22, w.e11, w.e12]


def build_system(w0: Mat2, w1: Mat2) -> List[List[int]]:
    return [_row_left(w0), _row_transposed(w1), _row_left(w1 @ w0)]


def rank(m: List[List[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == n_rows:
            break
    return r


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def kernel_minors(m: List[List[int]]) -> List[int]:
    """Signed 3x3 minors of a 3x4 matrix; a kernel vector when rank is 3."""
    out = []
    for j in range(4):
        sub = [[row[k] for k in range(4) if k != j] for row in m]
        out.append((-1) ** j * _det3(sub))
    return out


def canonical(n: Mat2) -> Mat2:
    """Primitive representative with positive first non-zero entry."""
    g = content(n.entries())
    first = next(e for e in n.entries() if e)
    if first < 0:
        g = -g
    return Mat2(*(e // g for e in n.entries()))


def symmetrizes(w0: Mat2, w1: Mat2, n: Mat2) -> bool:
    return ((w0 @ n).is_symmetric() and (w1 @ n.T).is_symmetric()
            and (w1 @ w0 @ n).is_symmetric())


def solve_n(w0: Mat2, w1: Mat2) -> Mat2:
    """Canonical symmetrizer of the seeds.

    Raises :class:`NotInV` when the system is rank deficient and
    :class:`NotInU` when the minors give a singular matrix.
    """
    system = build_system(w0, w1)
    r = rank(system)
    if r < 3:
        raise NotInV(f"symmetry system has rank {r} < 3")
    n = Mat2(*kernel_minors(system))
    if n.det == 0:
        raise NotInU(f"kernel matrix {n} is singular")
    n = canonical(n)
    # cheap, and catches any sign slip in the minors
    if not symmetrizes(w0, w1, n):
        raise AssertionError(f"N={n} does not symmetrize the seeds")
    return n


def is_admissible(w0: Mat2, w1: Mat2) -> SeedPair:
    try:
        n = solve_n(w0, w1)
    except SymmetrizerError as exc:
        return SeedPair(w0, w1, None, False, f"{type(exc).__name__}: {exc}")
    return SeedPair(w0, w1, n, True)
