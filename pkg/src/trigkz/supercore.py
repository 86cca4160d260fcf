"""Z2-graded linear algebra over dual-mode scalars.

Conventions, fixed once and used everywhere:

* Tensor bases are ordered lexicographically with the leftmost factor most
  significant: basis vector (i, j) of V (x) W sits at index i*dim(W) + j.
* Matrices are column-convention: entry (i, j) is the coefficient of
  codomain vector i in the image of domain vector j.
* The tensor product of operators carries the Koszul rule
  (A (x) B)(v (x) w) = (-1)^{|B||v|} Av (x) Bw, applied per homogeneous
  component of B.

A matrix is stored either as a complex array of shape (m, n) or, in series
mode, as an array of shape (N+1, m, n) holding the coefficient of h^k in
slice k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .scalars import HSeries, SeriesError

__all__ = [
    "SuperSpace",
    "GradedMatrix",
    "koszul_flip",
    "tensor_product_op",
    "tensor_many",
    "place_single",
    "place_pair",
    "matrix_exp",
    "trace",
]


@dataclass(frozen=True)
class SuperSpace:
    """An ordered homogeneous basis with a parity flag per vector."""

    labels: tuple
    parities: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise ValueError("labels and parities must have equal length")
        if len(self.labels) == 0:
            raise ValueError("total dimension must be at least 1")
        if any(p not in (0, 1) for p in self.parities):
            raise ValueError("parities must be 0 or 1")

    @classmethod
    def from_parities(cls, parities, prefix="v"):
        parities = tuple(int(p) for p in parities)
        return cls(tuple(f"{prefix}{i+1}" for i in range(len(parities))), parities)

    @property
    def dim(self):
        return len(self.labels)

    @property
    def d0(self):
        return sum(1 for p in self.parities if p == 0)

    @property
    def d1(self):
        return sum(1 for p in self.parities if p == 1)

    @property
    def parity_array(self):
        return np.array(self.parities, dtype=np.int64)

    def tensor(self, other: "SuperSpace") -> "SuperSpace":
        labels = tuple(f"{a}.{b}" for a in self.labels for b in other.labels)
        parities = tuple(
            (pa + pb) % 2 for pa in self.parities for pb in other.parities)
        return SuperSpace(labels, parities)

    def __repr__(self):
        return f"SuperSpace({self.d0}|{self.d1})"


def _series_matmul(a, b):
    K = a.shape[0]
    out = np.zeros((K, a.shape[1], b.shape[2]), dtype=complex)
    for k in range(K):
        for i in range(k + 1):
            out[k] += a[i] @ b[k - i]
    return out


def _series_kron(a, b):
    K = a.shape[0]
    m = a.shape[1] * b.shape[1]
    n = a.shape[2] * b.shape[2]
    out = np.zeros((K, m, n), dtype=complex)
    for k in range(K):
        for i in range(k + 1):
            out[k] += np.kron(a[i], b[k - i])
    return out


class GradedMatrix:
    """A linear operator between graded spaces, possibly inhomogeneous."""

    __slots__ = ("domain", "codomain", "data", "order")

    def __init__(self, domain, codomain, data, order=None):
        data = np.asarray(data, dtype=complex)
        if order is None:
            expected = (codomain.dim, domain.dim)
        else:
            expected = (order + 1, codomain.dim, domain.dim)
        if data.shape != expected:
            raise ValueError(f"data shape {data.shape}, expected {expected}")
        self.domain = domain
        self.codomain = codomain
        self.data = data
        self.order = order

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, space, order=None):
        eye = np.eye(space.dim, dtype=complex)
        if order is None:
            return cls(space, space, eye)
        data = np.zeros((order + 1, space.dim, space.dim), dtype=complex)
        data[0] = eye
        return cls(space, space, data, order)

    @classmethod
    def zeros(cls, domain, codomain, order=None):
        if order is None:
            data = np.zeros((codomain.dim, domain.dim), dtype=complex)
        else:
            data = np.zeros((order + 1, codomain.dim, domain.dim), dtype=complex)
        return cls(domain, codomain, data, order)

    # -- basics ------------------------------------------------------------

    @property
    def is_square(self):
        return self.domain == self.codomain

    def copy(self):
        return GradedMatrix(self.domain, self.codomain, self.data.copy(), self.order)

    def to_series(self, order):
        """Lift a complex-mode matrix into series mode as an h^0 coefficient."""
        if self.order is not None:
            if self.order != order:
                raise SeriesError("order mismatch in series lift")
            return self
        data = np.zeros((order + 1,) + self.data.shape, dtype=complex)
        data[0] = self.data
        return GradedMatrix(self.domain, self.codomain, data, order)

    def coeff(self, k):
        """The h^k coefficient as a complex-mode matrix."""
        if self.order is None:
            if k == 0:
                return self
            return GradedMatrix.zeros(self.domain, self.codomain)
        return GradedMatrix(self.domain, self.codomain, self.data[k])

    def _join(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("space mismatch")
        if self.order != other.order:
            raise SeriesError("scalar mode mismatch")

    def __add__(self, other):
        self._join(other)
        return GradedMatrix(self.domain, self.codomain, self.data + other.data, self.order)

    def __sub__(self, other):
        self._join(other)
        return GradedMatrix(self.domain, self.codomain, self.data - other.data, self.order)

    def __neg__(self):
        return GradedMatrix(self.domain, self.codomain, -self.data, self.order)

    def scale(self, s):
        """Multiply by a scalar of either mode, promoting to series if needed."""
        if isinstance(s, HSeries):
            m = self if self.order is not None else self.to_series(s.order)
            if m.order != s.order:
                raise SeriesError("order mismatch in scalar multiple")
            K = s.order + 1
            out = np.zeros_like(m.data)
            for k in range(K):
                for i in range(k + 1):
                    out[k] += s.coeffs[i] * m.data[k - i]
            return GradedMatrix(m.domain, m.codomain, out, m.order)
        return GradedMatrix(self.domain, self.codomain, complex(s) * self.data, self.order)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.domain != other.codomain:
            raise ValueError("composition space mismatch")
        if self.order != other.order:
            raise SeriesError("scalar mode mismatch")
        if self.order is None:
            data = self.data @ other.data
        else:
            data = _series_matmul(self.data, other.data)
        return GradedMatrix(other.domain, self.codomain, data, self.order)

    def inv(self):
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        if self.order is None:
            return GradedMatrix(self.domain, self.codomain, np.linalg.inv(self.data))
        a0inv = np.linalg.inv(self.data[0])
        K = self.order + 1
        out = np.zeros_like(self.data)
        out[0] = a0inv
        for k in range(1, K):
            acc = np.zeros_like(a0inv)
            for j in range(1, k + 1):
                acc += self.data[j] @ out[k - j]
            out[k] = -a0inv @ acc
        return GradedMatrix(self.domain, self.codomain, out, self.order)

    def expm(self):
        return matrix_exp(self)

    def trace(self, super=False):
        return trace(self, super=super)

    def inf_norm(self):
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def entry(self, i, j):
        if self.order is None:
            return complex(self.data[i, j])
        return HSeries(self.data[:, i, j])

    def allclose(self, other, tol=1e-12):
        self._join(other)
        return bool(np.max(np.abs(self.data - other.data)) <= tol)

    # -- parity structure --------------------------------------------------

    def entry_parities(self):
        """Parity of each entry position: row parity + column parity mod 2."""
        pr = self.codomain.parity_array[:, None]
        pc = self.domain.parity_array[None, :]
        return (pr + pc) % 2

    def parity_part(self, p):
        """The parity-p homogeneous component (entries of the other parity zeroed)."""
        mask = (self.entry_parities() == p)
        data = self.data * mask if self.order is None else self.data * mask[None, :, :]
        return GradedMatrix(self.domain, self.codomain, data, self.order)

    def operator_parity(self):
        """0 or 1 if homogeneous (zero counts as even), None if mixed."""
        mask = self.entry_parities() == 1
        if self.order is not None:
            mask = np.broadcast_to(mask[None], self.data.shape)
        has_odd = np.any(self.data[mask] != 0)
        has_even = np.any(self.data[~mask] != 0)
        if has_odd and has_even:
            return None
        return 1 if has_odd else 0

    def __repr__(self):
        mode = "complex" if self.order is None else f"series(N={self.order})"
        return (f"GradedMatrix({self.codomain.dim}x{self.domain.dim}, {mode})")


def koszul_flip(V, W, order=None):
    """Matrix of the signed swap v (x) w -> (-1)^{|v||w|} w (x) v.

    Maps V (x) W to W (x) V in the lexicographic bases.
    """
    dV, dW = V.dim, W.dim
    M = np.zeros((dW * dV, dV * dW), dtype=complex)
    for i in range(dV):
        for j in range(dW):
            sign = -1.0 if (V.parities[i] and W.parities[j]) else 1.0
            M[j * dV + i, i * dW + j] = sign
    out = GradedMatrix(V.tensor(W), W.tensor(V), M)
    return out if order is None else out.to_series(order)


def tensor_product_op(A, B):
    """Koszul-signed tensor product of two operators.

    (A (x) B)(v (x) w) = (-1)^{|B||v|} Av (x) Bw.  Only B's parity enters the
    sign, so B is split into homogeneous components; A may stay mixed.
    """
    if A.order != B.order:
        raise SeriesError("scalar mode mismatch")
    dom = A.domain.tensor(B.domain)
    cod = A.codomain.tensor(B.codomain)
    kron = np.kron if A.order is None else _series_kron

    out = None
    colsign = (-1.0) ** A.domain.parity_array  # (-1)^{|v|} per column of A
    for p in (0, 1):
        Bp = B.parity_part(p)
        if not np.any(Bp.data != 0):
            continue
        if p == 0:
            Adata = A.data
        elif A.order is None:
            Adata = A.data * colsign[None, :]
        else:
            Adata = A.data * colsign[None, None, :]
        piece = kron(Adata, Bp.data)
        out = piece if out is None else out + piece
    if out is None:
        return GradedMatrix.zeros(dom, cod, A.order)
    return GradedMatrix(dom, cod, out, A.order)


def tensor_many(ops):
    """Left fold of tensor_product_op; the super tensor product is associative."""
    return reduce(tensor_product_op, ops)


def place_single(a, j, n):
    """1 (x) ... (x) a (x) ... (x) 1 with a in slot j of an n-fold power (1-based)."""
    if not (1 <= j <= n):
        raise IndexError(f"slot {j} out of range for n={n}")
    if not a.is_square:
        raise ValueError("placement needs an endomorphism")
    eye = GradedMatrix.identity(a.domain, a.order)
    return tensor_many([a if i == j else eye for i in range(1, n + 1)])


def place_pair(terms, j, k, n):
    """Place a two-leg tensor sum(c * a (x) b) into slots (j, k) of n slots.

    ``terms`` is a list of (coeff, a, b) with a, b parity-homogeneous
    endomorphisms of one space.  For j < k the factors are placed in order;
    for j > k each summand picks up the sign (-1)^{|a||b|}.
    """
    if j == k:
        raise IndexError("slots must differ")
    if not (1 <= j <= n and 1 <= k <= n):
        raise IndexError(f"slots ({j},{k}) out of range for n={n}")
    if not terms:
        raise ValueError("empty tensor")
    space = terms[0][1].domain
    order = terms[0][1].order
    eye = GradedMatrix.identity(space, order)
    total = None
    for coeff, a, b in terms:
        pa, pb = a.operator_parity(), b.operator_parity()
        if pa is None or pb is None:
            raise ValueError("place_pair needs homogeneous pure tensors")
        c = coeff
        if j > k:
            lo, hi = k, j
            first, second = b, a
            if pa and pb:
                c = -c
        else:
            lo, hi = j, k
            first, second = a, b
        factors = [eye] * n
        factors[lo - 1] = first
        factors[hi - 1] = second
        piece = tensor_many(factors).scale(c)
        total = piece if total is None else total + piece
    return total


def matrix_exp(X):
    """Matrix exponential.

    Complex mode uses scaling-and-squaring (scipy.linalg.expm).  Series mode
    sums the Taylor series and requires it to terminate, which happens exactly
    when the h^0 part is nilpotent (in particular for exponents of the form
    h * Y).
    """
    if not X.is_square:
        raise ValueError("exponential of a non-square matrix")
    if X.order is None:
        return GradedMatrix(X.domain, X.codomain, scipy.linalg.expm(X.data))
    dim = X.domain.dim
    max_terms = (X.order + 1) * (dim + 1) + 2
    acc = GradedMatrix.identity(X.domain, X.order)
    term = GradedMatrix.identity(X.domain, X.order)
    for m in range(1, max_terms + 1):
        term = (term @ X).scale(1.0 / m)
        if not np.any(term.data != 0):
            return acc
        acc = acc + term
    raise SeriesError(
        "series exponential does not terminate; h^0 part must be nilpotent")


def trace(X, super=False):
    """Ordinary or signed trace; the latter weights row i by (-1)^{|i|}."""
    if not X.is_square:
        raise ValueError("trace of a non-square matrix")
    signs = (-1.0) ** X.domain.parity_array if super else np.ones(X.domain.dim)
    if X.order is None:
        return complex(np.sum(np.diagonal(X.data) * signs))
    vals = np.einsum("kii,i->k", X.data, signs)
    return HSeries(vals)
