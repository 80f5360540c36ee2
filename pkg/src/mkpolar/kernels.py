"""Binary and ternary polarizing kernels and their Kronecker products.

Binary matrices are plain ``numpy.uint8`` arrays holding 0/1 entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

T2 = np.array([[1, 1], [1, 0]], dtype=np.uint8)
T3 = np.array([[1, 1, 1], [1, 0, 1], [0, 1, 1]], dtype=np.uint8)
T2.flags.writeable = False
T3.flags.writeable = False

KERNELS = {2: T2, 3: T3}

# Dense generators are only built up to this size (O(N^2) memory).
MAX_DENSE_N = 4096


@dataclass(frozen=True)
class Kernel:
    dim: int

    def __post_init__(self):
        if self.dim not in KERNELS:
            raise ValueError(f"kernel dimension must be 2 or 3, got {self.dim}")

    @property
    def matrix(self) -> np.ndarray:
        return KERNELS[self.dim]


@dataclass(frozen=True)
class KernelSeq:
    """Ordered kernel dimensions, outermost kernel first.

    ``KernelSeq((3, 2, 2, 2, 2))`` is the generator T3 x T2 x T2 x T2 x T2.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("kernel sequence must not be empty")
        bad = [d for d in dims if d not in KERNELS]
        if bad:
            raise ValueError(f"kernel dimensions must be 2 or 3, got {bad}")

    @classmethod
    def parse(cls, text: str) -> "KernelSeq":
        """Parse the comma-separated form, e.g. ``"3,2,2,2,2"`` or ``"{3,2,2}"``."""
        body = text.strip().strip("{}")
        try:
            dims = tuple(int(tok) for tok in body.split(",") if tok.strip())
        except ValueError:
            raise ValueError(f"malformed kernel sequence {text!r}") from None
        return cls(dims)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    @property
    def n_bits(self) -> int:
        return int(np.prod(self.dims))

    @property
    def stages(self) -> int:
        return len(self.dims)

    @property
    def n_ternary(self) -> int:
        return self.dims.count(3)

    def node_sizes(self) -> list[int]:
        """Node size at each tree level, root (N) down to the leaves (1)."""
        sizes = [1]
        for d in reversed(self.dims):
            sizes.append(sizes[-1] * d)
        return sizes[::-1]


def kronecker(a, b) -> np.ndarray:
    """Kronecker product of two binary matrices over GF(2).

    Entry ``(i*b.rows + k, j*b.cols + l)`` equals ``a[i, j] * b[k, l]``.
    """
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] & b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def generator(seq: KernelSeq) -> np.ndarray:
    """Dense generator matrix: left fold of :func:`kronecker` over ``seq``."""
    if seq.n_bits > MAX_DENSE_N:
        raise ValueError(
            f"dense generator limited to N <= {MAX_DENSE_N}, got {seq.n_bits}"
        )
    g = np.ones((1, 1), dtype=np.uint8)
    for d in seq.dims:
        g = kronecker(g, KERNELS[d])
    return g


def gf2_matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


def gf2_inverse(m) -> np.ndarray:
    """Inverse of a square binary matrix by Gauss-Jordan elimination over GF(2).

    Raises ``ValueError`` if the matrix is singular.
    """
    m = np.asarray(m, dtype=np.uint8)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix must be square")
    aug = np.concatenate([m.copy(), np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise ValueError("matrix is singular over GF(2)")
        p = col + pivots[0]
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        rows = np.nonzero(aug[:, col])[0]
        rows = rows[rows != col]
        aug[rows] ^= aug[col]
    return aug[:, n:]


def factorize(n_bits: int) -> tuple[int, int]:
    """Return ``(n, m)`` with ``n_bits == 2**n * 3**m``, or raise ``ValueError``."""
    if n_bits < 2:
        raise ValueError(f"block length must be >= 2, got {n_bits}")
    rest, n, m = n_bits, 0, 0
    while rest % 2 == 0:
        rest //= 2
        n += 1
    while rest % 3 == 0:
        rest //= 3
        m += 1
    if rest != 1:
        raise ValueError(f"block length {n_bits} is not of the form 2^n * 3^m")
    return n, m


def mother_length(n_bits: int) -> int:
    """Smallest power of two that is >= ``n_bits``."""
    return 1 << (int(n_bits) - 1).bit_length()


def kernel_orders(n_bits: int) -> list[KernelSeq]:
    """All distinct kernel orderings of length ``n_bits``, in lexicographic order."""
    n, m = factorize(n_bits)
    dims = (2,) * n + (3,) * m
    return [KernelSeq(p) for p in sorted(set(permutations(dims)))]


def count_kernel_orders(n_bits: int) -> int:
    from math import comb

    n, m = factorize(n_bits)
    return comb(n + m, m)


def enumerate_block_lengths(
    max_terms: int, include_pure_ternary: bool = True
) -> list[tuple[int, int]]:
    """All ``(M, N)`` with ``N = 2**n * 3**m`` and ``n + m = M`` for ``M <= max_terms``.

    Entries are grouped by ``M`` and sorted ascending within each group.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    out = []
    for big_m in range(1, max_terms + 1):
        lengths = []
        for m in range(big_m + 1):
            n = big_m - m
            if n == 0 and not include_pure_ternary:
                continue
            lengths.append(2**n * 3**m)
        out.extend((big_m, nb) for nb in sorted(lengths))
    return out
