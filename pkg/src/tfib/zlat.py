"""Exact integer and affine-integral linear algebra.

Matrices are tuples of tuples of Python ints (arbitrary precision), n = 2
or 3 throughout.  Affine maps carry an integer linear part and an exact
rational translation; a parallel "numeric" tag allows float translations
for the analytic lab.  Everything is immutable and safe to share.

Also home to the exact conjugacy machinery (Smith-normal-form prefilters
plus a bounded search over integer conjugators) used by the simplicity
checker and the semi-stable validation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

IntMatrix = Tuple[Tuple[int, ...], ...]


def mat(rows) -> IntMatrix:
    """Freeze a nested sequence into an IntMatrix, validating squareness."""
    m = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def dim(m: IntMatrix) -> int:
    return len(m)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    if len(b) != n:
        raise ValueError("dimension mismatch")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def mat_vec(a: IntMatrix, v: Sequence) -> tuple:
    n = len(a)
    if len(v) != n:
        raise ValueError("dimension mismatch")
    return tuple(sum(a[i][k] * v[k] for k in range(n)) for i in range(n))


def mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(m: IntMatrix) -> IntMatrix:
    n = len(m)
    return tuple(tuple(m[j][i] for j in range(n)) for i in range(n))


def det(m: IntMatrix) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    # Laplace expansion; n stays <= 3 in this package but keep it total.
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def adjugate(m: IntMatrix) -> IntMatrix:
    n = len(m)
    if n == 1:
        return ((1,),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                r[:j] + r[j + 1:] for k, r in enumerate(m) if k != i
            )
            row.append((-1) ** (i + j) * det(minor))
        cof.append(tuple(row))
    return transpose(tuple(cof))


def inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse; requires det = +/-1 (GL(n,Z) membership)."""
    d = det(m)
    if d not in (1, -1):
        raise ValueError(f"matrix not invertible over Z (det={d})")
    adj = adjugate(m)
    return tuple(tuple(d * v for v in row) for row in adj)


def inverse_transpose(m: IntMatrix) -> IntMatrix:
    """(m^t)^{-1}, exact; an involution on GL(n,Z)."""
    return inverse(transpose(m))


def is_gl(m: IntMatrix) -> bool:
    return det(m) in (1, -1)


def is_unipotent(m: IntMatrix) -> bool:
    """True iff (m - I)^n = 0."""
    n = len(m)
    p = mat_sub(m, identity(n))
    acc = p
    for _ in range(n - 1):
        acc = mat_mul(acc, p)
    return acc == tuple(tuple(0 for _ in range(n)) for _ in range(n))


def rank(m: IntMatrix) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    rows = [[Fraction(v) for v in row] for row in m]
    n = len(rows)
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def charpoly(m: IntMatrix) -> Tuple[int, ...]:
    """Characteristic polynomial coefficients, Faddeev-LeVerrier, exact."""
    n = len(m)
    coeffs = [1]
    acc = identity(n)
    prev = identity(n)
    for k in range(1, n + 1):
        acc = mat_mul(m, prev)
        c = -sum(acc[i][i] for i in range(n))
        if k > 1:
            c = Fraction(c, k)
            assert c.denominator == 1
            c = c.numerator
        coeffs.append(int(c))
        prev = mat_add(acc, tuple(
            tuple(coeffs[-1] if i == j else 0 for j in range(n)) for i in range(n)
        ))
    return tuple(coeffs)


def smith_invariants(m: IntMatrix) -> Tuple[int, ...]:
    """Diagonal of the Smith normal form (nonnegative, sorted by divisibility).

    Invariant under left/right GL(n,Z) action, in particular under
    conjugation; the cheap conclusive obstruction for conjugacy tests.
    """
    a = [list(row) for row in m]
    n = len(a)
    result = []
    top = 0
    while top < n:
        # find a nonzero pivot in the submatrix
        piv = None
        for i in range(top, n):
            for j in range(top, n):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            result.extend([0] * (n - top))
            break
        i, j = piv
        a[top], a[i] = a[i], a[top]
        for row in a:
            row[top], row[j] = row[j], row[top]
        while True:
            # clear column then row by Euclidean steps
            changed = False
            for i in range(top + 1, n):
                if a[i][top] != 0:
                    q = a[i][top] // a[top][top]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][top] != 0:
                        a[top], a[i] = a[i], a[top]
                    changed = True
            for j in range(top + 1, n):
                if a[top][j] != 0:
                    q = a[top][j] // a[top][top]
                    for row in a:
                        row[j] -= q * row[top]
                    if a[top][j] != 0:
                        for row in a:
                            row[top], row[j] = row[j], row[top]
                    changed = True
            if not changed:
                break
        result.append(abs(a[top][top]))
        top += 1
    # enforce divisibility chain
    result = sorted(result, key=lambda v: (v == 0, v))
    for i in range(len(result) - 1):
        for j in range(i + 1, len(result)):
            if result[i] and result[j] % max(result[i], 1) != 0:
                import math
                g = math.gcd(result[i], result[j])
                l = result[i] * result[j] // g if g else 0
                result[i], result[j] = g, l
    return tuple(result)


# ----------------------------------------------------------------------
# affine-integral maps
# ----------------------------------------------------------------------

def _coerce_translation(translation, numeric):
    if numeric:
        return tuple(float(v) for v in translation)
    return tuple(Fraction(v) for v in translation)


@dataclass(frozen=True)
class AffineMapZ:
    """x -> linear @ x + translation with linear part in GL(n,Z).

    Exact mode stores the translation as Fractions; `numeric=True` tags a
    float translation for the analytic lab.  Composition of an exact and a
    numeric map is numeric.
    """

    linear: IntMatrix
    translation: tuple
    numeric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "linear", mat(self.linear))
        if len(self.translation) != len(self.linear):
            raise ValueError("dimension mismatch between linear part and translation")
        object.__setattr__(
            self, "translation", _coerce_translation(self.translation, self.numeric)
        )
        if not is_gl(self.linear):
            raise ValueError("linear part must lie in GL(n,Z)")

    @staticmethod
    def from_linear(linear) -> "AffineMapZ":
        linear = mat(linear)
        return AffineMapZ(linear, (0,) * len(linear))

    @staticmethod
    def identity(n: int) -> "AffineMapZ":
        return AffineMapZ(identity(n), (0,) * n)

    @property
    def dim(self) -> int:
        return len(self.linear)

    def __call__(self, point):
        moved = mat_vec(self.linear, tuple(point))
        return tuple(a + b for a, b in zip(moved, self.translation))

    def is_identity(self) -> bool:
        return self.linear == identity(self.dim) and all(
            v == 0 for v in self.translation
        )


def compose(a: AffineMapZ, b: AffineMapZ) -> AffineMapZ:
    """(a o b)(x) = a(b(x)), exact unless either factor is numeric."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    numeric = a.numeric or b.numeric
    lin = mat_mul(a.linear, b.linear)
    tr = tuple(x + y for x, y in zip(mat_vec(a.linear, b.translation), a.translation))
    if numeric:
        tr = tuple(float(v) for v in tr)
    return AffineMapZ(lin, tr, numeric=numeric)


def invert(a: AffineMapZ) -> AffineMapZ:
    linv = inverse(a.linear)
    tr = tuple(-v for v in mat_vec(linv, a.translation))
    if a.numeric:
        tr = tuple(float(v) for v in tr)
    return AffineMapZ(linv, tr, numeric=a.numeric)


# ----------------------------------------------------------------------
# JSON encoding
# ----------------------------------------------------------------------

def matrix_to_json(m: IntMatrix) -> list:
    return [list(row) for row in m]


def matrix_from_json(data) -> IntMatrix:
    return mat(data)


def affine_to_json(a: AffineMapZ) -> dict:
    if a.numeric:
        tr = [float(v) for v in a.translation]
    else:
        tr = [str(v) for v in a.translation]
    return {"linear": matrix_to_json(a.linear), "translation": tr, "numeric": a.numeric}


def affine_from_json(data) -> AffineMapZ:
    numeric = bool(data.get("numeric", False))
    tr = data["translation"]
    if numeric:
        tr = tuple(float(v) for v in tr)
    else:
        tr = tuple(Fraction(v) for v in tr)
    return AffineMapZ(matrix_from_json(data["linear"]), tr, numeric=numeric)


# ----------------------------------------------------------------------
# conjugacy over GL(n,Z)
# ----------------------------------------------------------------------

def _nullspace_rref(rows, ncols):
    """RREF nullspace basis of an exact rational matrix given as row lists.

    Returns a list of Fraction vectors such that every solution's
    coordinates at the free columns are exactly its coefficients in this
    basis (the standard free-variable parametrization).
    """
    rows = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [v / rows[r][col] for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        basis.append(vec)
    return basis, free


def simultaneous_conjugator(
    sources: Sequence[IntMatrix],
    targets: Sequence[IntMatrix],
    bound: int = 3,
) -> Optional[IntMatrix]:
    """Find P in GL(n,Z), entries in [-bound, bound], with P^{-1} A_i P = B_i.

    The condition A_i P = P B_i is linear in P; we solve it exactly over Q
    and enumerate integer points of the solution space (the free-variable
    coordinates of any solution are entries of P, so they are bounded by
    ``bound`` too, making the enumeration complete within the box).
    Returns the conjugator or None.  Conclusive invariant prefilters
    (charpoly, Smith form of A - I) run first; results are memoized, since
    graph validation asks about the same few matrices over and over.
    """
    return _conjugator_cached(tuple(sources), tuple(targets), bound)


@functools.lru_cache(maxsize=4096)
def _conjugator_cached(sources, targets, bound):
    if len(sources) != len(targets):
        raise ValueError("source/target lists differ in length")
    if not sources:
        raise ValueError("empty conjugacy problem")
    n = len(sources[0])
    for a, b in zip(sources, targets):
        if len(a) != n or len(b) != n:
            raise ValueError("dimension mismatch")
        if charpoly(a) != charpoly(b):
            return None
        if smith_invariants(mat_sub(a, identity(n))) != smith_invariants(
            mat_sub(b, identity(n))
        ):
            return None
    if tuple(sources) == tuple(targets):
        return identity(n)
    # build the linear system (A P - P B = 0 for every pair), unknowns P[i][j]
    rows = []
    for a, b in zip(sources, targets):
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for k in range(n):
                    row[k * n + j] += a[i][k]
                    row[i * n + k] -= b[k][j]
                rows.append(row)
    basis, _ = _nullspace_rref(rows, n * n)
    if not basis:
        return None
    return _enumerate_conjugators(basis, n, bound)


def _enumerate_conjugators(basis, n, bound):
    """Complete search over the box [-bound, bound] in free coordinates.

    The RREF parametrization makes the free coordinates of any solution
    equal entries of P, so they obey the same bound; scaling the rational
    basis to integers turns membership into a divisibility test, which
    numpy handles in bulk.
    """
    import numpy as np

    denom = 1
    for vec in basis:
        for v in vec:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
    b_int = np.array(
        [[int(v * denom) for v in vec] for vec in basis], dtype=np.int64
    )
    d = len(basis)
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    best = None
    chunk = 200_000
    total = (2 * bound + 1) ** d
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coeffs = np.empty((idx.size, d), dtype=np.int64)
        rest = idx
        for k in range(d - 1, -1, -1):
            coeffs[:, k] = rng[rest % rng.size]
            rest = rest // rng.size
        vecs = coeffs @ b_int  # entries of denom * P
        ok = (vecs % denom == 0).all(axis=1)
        vecs = vecs[ok] // denom
        ok = (np.abs(vecs) <= bound).all(axis=1)
        vecs = vecs[ok]
        if vecs.size == 0:
            continue
        mats = vecs.reshape(-1, n, n)
        if n == 2:
            dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
        else:
            dets = (
                mats[:, 0, 0] * (mats[:, 1, 1] * mats[:, 2, 2]
                                 - mats[:, 1, 2] * mats[:, 2, 1])
                - mats[:, 0, 1] * (mats[:, 1, 0] * mats[:, 2, 2]
                                   - mats[:, 1, 2] * mats[:, 2, 0])
                + mats[:, 0, 2] * (mats[:, 1, 0] * mats[:, 2, 1]
                                   - mats[:, 1, 1] * mats[:, 2, 0])
            )
        unimodular = np.abs(dets) == 1
        if not unimodular.any():
            continue
        cands = mats[unimodular]
        norms = np.abs(cands).max(axis=(1, 2))
        pick = cands[int(np.argmin(norms))]
        p = tuple(tuple(int(v) for v in row) for row in pick)
        if best is None or max(abs(v) for row in p for v in row) < best[0]:
            best = (max(abs(v) for row in p for v in row), p)
        # the smallest possible sup-norm is 1; stop early when reached
        if best[0] == 1:
            return best[1]
    return best[1] if best else None


def conjugator(a: IntMatrix, b: IntMatrix, bound: int = 3) -> Optional[IntMatrix]:
    """GL(n,Z) conjugator P with P^{-1} a P = b, or None."""
    return simultaneous_conjugator([a], [b], bound=bound)


def fixed_space_dimension(mats: Sequence[IntMatrix]) -> int:
    """Dimension of the common fixed subspace of a list of matrices (over Q)."""
    if not mats:
        raise ValueError("empty matrix list")
    n = len(mats[0])
    rows = []
    for m in mats:
        for row in mat_sub(m, identity(n)):
            rows.append(list(row))
    basis, _ = _nullspace_rref(rows, n)
    return len(basis)


# ----------------------------------------------------------------------
# the standard generators
# ----------------------------------------------------------------------

#: node / focus-focus monodromy generator (n = 2)
T_NODE: IntMatrix = mat([[1, 0], [1, 1]])

#: generic-singular monodromy generator (n = 3)
T_GENERIC: IntMatrix = mat([[1, 0, 0], [1, 1, 0], [0, 0, 1]])

#: negative-vertex triple, product T1 T2 T3 = I
NEGATIVE_TRIPLE: Tuple[IntMatrix, IntMatrix, IntMatrix] = (
    mat([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    mat([[1, 0, -1], [0, 1, 0], [0, 0, 1]]),
    mat([[1, -1, 1], [0, 1, 0], [0, 0, 1]]),
)

#: positive-vertex triple: entrywise inverse transpose of the negative one
POSITIVE_TRIPLE: Tuple[IntMatrix, IntMatrix, IntMatrix] = tuple(
    inverse_transpose(t) for t in NEGATIVE_TRIPLE
)
