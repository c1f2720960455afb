"""Truncated q-deformed Fock space over R^d.

A degree-n tensor is a flat float array of length d**n in row-major
multi-index encoding: the entry for (i_1, ..., i_n), i_k in 0..d-1, lives at
index sum_k i_k * d**(n-1-k).  A graded vector is a finite family of such
tensors for degrees 0..N; degree N is the truncation: creation drops the
component that would land at degree N + 1.

The twisted scalar product on degree n is (P f, g) where P is the
inversion-weighted sum of permutation actions on tensor factors.  One-particle
vectors are plain length-d arrays.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .qcombinatorics import (
    PERMUTATION_CAP,
    check_deformation,
    inversions,
    q_factorial,
)

EIGENSOLVER_CAP = 4096  # largest d**n for dense spectral probes
MATRIX_CACHE_CAP = 4096  # largest d**n for which the dense P matrix is memoized


@dataclass(frozen=True)
class QContext:
    """Deformation parameter, one-particle dimension, truncation degree, tolerance."""

    q: float
    dim: int
    max_degree: int
    tol: float = 1e-12

    def __post_init__(self):
        check_deformation(self.q)
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def as_one_particle(phi, dim: int) -> np.ndarray:
    phi = np.asarray(phi, dtype=float).reshape(-1)
    if phi.shape != (dim,):
        raise ValueError(f"one-particle vector must have length {dim}, got {phi.shape}")
    if not np.all(np.isfinite(phi)):
        raise ValueError("one-particle vector entries must be finite")
    return phi


def basis_vector(dim: int, i: int) -> np.ndarray:
    e = np.zeros(dim)
    e[i] = 1.0
    return e


def elementary_tensor(vectors) -> np.ndarray:
    """f_1 (x) ... (x) f_n as a flat row-major array; the empty product is (1,)."""
    out = np.ones(1)
    for v in vectors:
        out = np.kron(out, np.asarray(v, dtype=float))
    return out


@dataclass(frozen=True, eq=False)
class GradedVector:
    """A degree-indexed family of dense tensors; absent degrees are zero."""

    ctx: QContext
    components: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[int, np.ndarray] = {}
        for n, comp in self.components.items():
            n = int(n)
            if not 0 <= n <= self.ctx.max_degree:
                raise ValueError(
                    f"degree {n} outside truncation 0..{self.ctx.max_degree}"
                )
            arr = np.array(comp, dtype=float).reshape(-1)
            if arr.shape != (self.ctx.dim**n,):
                raise ValueError(
                    f"degree-{n} component must have length {self.ctx.dim ** n}"
                )
            arr.flags.writeable = False
            clean[n] = arr
        object.__setattr__(self, "components", clean)

    @classmethod
    def vacuum(cls, ctx: QContext) -> "GradedVector":
        return cls(ctx, {0: np.ones(1)})

    @classmethod
    def zero(cls, ctx: QContext) -> "GradedVector":
        return cls(ctx, {})

    @classmethod
    def random(cls, ctx: QContext, rng: np.random.Generator, degrees=None) -> "GradedVector":
        """Independent standard-normal entries in every degree up to the cutoff."""
        if degrees is None:
            degrees = range(ctx.max_degree + 1)
        comps = {n: rng.standard_normal(ctx.dim**n) for n in degrees}
        return cls(ctx, comps)

    def component(self, n: int) -> np.ndarray:
        if n in self.components:
            return self.components[n]
        return np.zeros(self.ctx.dim**n)

    def degrees(self):
        return sorted(self.components)

    def __add__(self, other: "GradedVector") -> "GradedVector":
        require_same_context(self, other)
        comps = dict(self.components)
        for n, arr in other.components.items():
            comps[n] = comps[n] + arr if n in comps else arr
        return GradedVector(self.ctx, comps)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        return self + other.scale(-1.0)

    def scale(self, c: float) -> "GradedVector":
        return GradedVector(self.ctx, {n: c * arr for n, arr in self.components.items()})

    def euclidean_norm(self) -> float:
        return float(
            np.sqrt(sum(float(arr @ arr) for arr in self.components.values()))
        )

    def max_abs(self) -> float:
        if not self.components:
            return 0.0
        return max(float(np.max(np.abs(arr))) for arr in self.components.values())

    def allclose(self, other: "GradedVector", atol: float = 0.0, rtol: float = 0.0) -> bool:
        require_same_context(self, other)
        for n in set(self.components) | set(other.components):
            if not np.allclose(self.component(n), other.component(n), atol=atol, rtol=rtol):
                return False
        return True

    # -- JSON wire format: {"q","dim","max_degree","components":{"0":[...],...}} --

    def to_json_dict(self) -> dict:
        return {
            "q": self.ctx.q,
            "dim": self.ctx.dim,
            "max_degree": self.ctx.max_degree,
            "components": {str(n): arr.tolist() for n, arr in self.components.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict, tol: float = 1e-12) -> "GradedVector":
        ctx = QContext(data["q"], int(data["dim"]), int(data["max_degree"]), tol)
        comps = {int(n): np.asarray(arr, dtype=float) for n, arr in data["components"].items()}
        return cls(ctx, comps)

    @classmethod
    def from_json(cls, text: str, tol: float = 1e-12) -> "GradedVector":
        return cls.from_json_dict(json.loads(text), tol)


def require_same_context(f: GradedVector, g: GradedVector) -> None:
    if f.ctx != g.ctx:
        raise ValueError(f"context mismatch: {f.ctx} vs {g.ctx}")


# ---------------------------------------------------------------------------
# The inversion-weighted symmetrizer P on degree-n tensors
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _perm_actions(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All permutations of n tensor slots with their inversion counts."""
    return tuple(
        (p, inversions([x + 1 for x in p])) for p in itertools.permutations(range(n))
    )


@functools.lru_cache(maxsize=None)
def pq_matrix(n: int, dim: int, q: float) -> np.ndarray:
    """Dense matrix of the degree-n symmetrizer; memoized per (n, dim, q).

    The cache is filled idempotently and entries are read-only, so concurrent
    use is safe.
    """
    check_deformation(q)
    if n > PERMUTATION_CAP:
        raise ValueError(f"symmetrizer capped at degree {PERMUTATION_CAP}, got {n}")
    size = dim**n
    if size > MATRIX_CACHE_CAP:
        raise ValueError(f"dense symmetrizer capped at dimension {MATRIX_CACHE_CAP}")
    if n <= 1 or dim == 1:
        mat = np.eye(size) * (q_factorial(n, q) if dim == 1 else 1.0)
        mat.flags.writeable = False
        return mat
    # digit k of every flat index, most significant first
    digits = np.empty((n, size), dtype=np.intp)
    idx = np.arange(size)
    for k in range(n):
        digits[k] = (idx // dim ** (n - 1 - k)) % dim
    mat = np.zeros((size, size))
    for p, inv in _perm_actions(n):
        gather = np.zeros(size, dtype=np.intp)
        for k in range(n):
            gather += digits[p[k]] * dim ** (n - 1 - k)
        mat[idx, gather] += q**inv
    mat.flags.writeable = False
    return mat


def apply_pq(n: int, t, ctx: QContext) -> np.ndarray:
    """Apply the degree-n symmetrizer: sum over permutations of q^inversions
    times the corresponding rearrangement of tensor factors."""
    t = np.asarray(t, dtype=float).reshape(-1)
    size = ctx.dim**n
    if t.shape != (size,):
        raise ValueError(f"degree-{n} tensor must have length {size}")
    if n > PERMUTATION_CAP:
        raise ValueError(f"symmetrizer capped at degree {PERMUTATION_CAP}, got {n}")
    if n <= 1:
        return t.copy()
    if ctx.dim == 1:
        return t * q_factorial(n, ctx.q)
    if size <= MATRIX_CACHE_CAP:
        return pq_matrix(n, ctx.dim, ctx.q) @ t
    # too large to memoize densely: direct summation over slot permutations
    cube = t.reshape((ctx.dim,) * n)
    out = np.zeros_like(cube)
    for p, inv in _perm_actions(n):
        out += (ctx.q**inv) * cube.transpose(p)
    return out.reshape(-1)


def q_inner(f: GradedVector, g: GradedVector) -> float:
    """Twisted scalar product: sum over degrees of (P f_n, g_n)."""
    require_same_context(f, g)
    total = 0.0
    for n in sorted(set(f.components) & set(g.components)):
        total += float(apply_pq(n, f.components[n], f.ctx) @ g.components[n])
    return total


def fock_norm(f: GradedVector) -> float:
    return float(np.sqrt(max(q_inner(f, f), 0.0)))


# ---------------------------------------------------------------------------
# Creation and annihilation
# ---------------------------------------------------------------------------


def create(phi, f: GradedVector, strict: bool = False) -> GradedVector:
    """Left tensor multiplication by phi; the top component falls off the
    truncation (raise instead when strict and it is nonzero)."""
    phi = as_one_particle(phi, f.ctx.dim)
    top = f.ctx.max_degree
    if strict and top in f.components and np.any(f.components[top] != 0.0):
        raise ValueError(
            f"creation overflow: nonzero degree-{top} component would exceed the truncation"
        )
    comps = {
        n + 1: np.kron(phi, arr) for n, arr in f.components.items() if n + 1 <= top
    }
    return GradedVector(f.ctx, comps)


def annihilate(phi, f: GradedVector) -> GradedVector:
    """q-weighted contraction: slot i is contracted against phi with weight
    q^(i-1); degree 0 maps to zero."""
    phi = as_one_particle(phi, f.ctx.dim)
    d, q = f.ctx.dim, f.ctx.q
    comps: dict[int, np.ndarray] = {}
    for n, arr in f.components.items():
        if n == 0:
            continue
        cube = arr.reshape((d,) * n)
        out = np.zeros(d ** (n - 1))
        weight = 1.0
        for i in range(n):
            out += weight * np.tensordot(phi, cube, axes=(0, i)).reshape(-1)
            weight *= q
        comps[n - 1] = comps.get(n - 1, 0.0) + out
    return GradedVector(f.ctx, comps)


# ---------------------------------------------------------------------------
# Dense operator matrices on the truncated space
# ---------------------------------------------------------------------------


def total_dim(ctx: QContext) -> int:
    return sum(ctx.dim**n for n in range(ctx.max_degree + 1))


def degree_offsets(ctx: QContext) -> list[int]:
    offsets = [0]
    for n in range(ctx.max_degree + 1):
        offsets.append(offsets[-1] + ctx.dim**n)
    return offsets


def vector_to_flat(f: GradedVector) -> np.ndarray:
    offsets = degree_offsets(f.ctx)
    flat = np.zeros(offsets[-1])
    for n, arr in f.components.items():
        flat[offsets[n] : offsets[n + 1]] = arr
    return flat


def flat_to_vector(flat: np.ndarray, ctx: QContext) -> GradedVector:
    offsets = degree_offsets(ctx)
    comps = {
        n: np.array(flat[offsets[n] : offsets[n + 1]])
        for n in range(ctx.max_degree + 1)
    }
    return GradedVector(ctx, comps)


def _creation_block(phi: np.ndarray, n: int, dim: int) -> np.ndarray:
    """Matrix of degree n-1 -> n left tensoring by phi."""
    return np.kron(phi.reshape(dim, 1), np.eye(dim ** (n - 1)))


def _annihilation_block(phi: np.ndarray, n: int, dim: int, q: float) -> np.ndarray:
    """Matrix of degree n -> n-1 q-weighted contraction against phi."""
    out = np.zeros((dim ** (n - 1), dim**n))
    weight = 1.0
    for i in range(n):
        out += weight * np.kron(
            np.kron(np.eye(dim**i), phi.reshape(1, dim)), np.eye(dim ** (n - 1 - i))
        )
        weight *= q
    return out


def creation_matrix(phi, ctx: QContext, max_total_dim: int = EIGENSOLVER_CAP) -> np.ndarray:
    phi = as_one_particle(phi, ctx.dim)
    offsets = degree_offsets(ctx)
    size = offsets[-1]
    if size > max_total_dim:
        raise ValueError(f"truncated space dimension {size} exceeds cap {max_total_dim}")
    mat = np.zeros((size, size))
    for n in range(1, ctx.max_degree + 1):
        mat[offsets[n] : offsets[n + 1], offsets[n - 1] : offsets[n]] = _creation_block(
            phi, n, ctx.dim
        )
    return mat


def annihilation_matrix(phi, ctx: QContext, max_total_dim: int = EIGENSOLVER_CAP) -> np.ndarray:
    phi = as_one_particle(phi, ctx.dim)
    offsets = degree_offsets(ctx)
    size = offsets[-1]
    if size > max_total_dim:
        raise ValueError(f"truncated space dimension {size} exceeds cap {max_total_dim}")
    mat = np.zeros((size, size))
    for n in range(1, ctx.max_degree + 1):
        mat[offsets[n - 1] : offsets[n], offsets[n] : offsets[n + 1]] = (
            _annihilation_block(phi, n, ctx.dim, ctx.q)
        )
    return mat


def field_matrix(phi, ctx: QContext, max_total_dim: int = EIGENSOLVER_CAP) -> np.ndarray:
    """Matrix of creation + annihilation by phi in the monomial basis.

    Self-adjointness is with respect to the twisted scalar product, not the
    Euclidean one: G^T P = P G where P is the block-diagonal Gram matrix.
    """
    return creation_matrix(phi, ctx, max_total_dim) + annihilation_matrix(
        phi, ctx, max_total_dim
    )


def gram_matrix(ctx: QContext, max_total_dim: int = EIGENSOLVER_CAP) -> np.ndarray:
    """Block-diagonal matrix of the twisted scalar product on degrees 0..N."""
    offsets = degree_offsets(ctx)
    size = offsets[-1]
    if size > max_total_dim:
        raise ValueError(f"truncated space dimension {size} exceeds cap {max_total_dim}")
    mat = np.zeros((size, size))
    for n in range(ctx.max_degree + 1):
        mat[offsets[n] : offsets[n + 1], offsets[n] : offsets[n + 1]] = pq_matrix(
            n, ctx.dim, ctx.q
        )
    return mat


def commutation_residual(phi, psi, ctx: QContext, swap_arguments: bool = True) -> float:
    """Operator norm, on degrees <= N-1, of

        a^-(phi) a^+(psi) - q a^+(psi') a^-(phi') - (phi, psi) Id.

    With swap_arguments (the rule under which the operators genuinely commute)
    the weighted term is a^+(psi) a^-(phi); without it the arguments are traded
    to a^+(phi) a^-(psi), a variant whose residual is generally nonzero and is
    reported rather than reconciled.
    """
    if ctx.max_degree < 1:
        raise ValueError("commutation probe needs max_degree >= 1")
    phi = as_one_particle(phi, ctx.dim)
    psi = as_one_particle(psi, ctx.dim)
    d, q = ctx.dim, ctx.q
    if swap_arguments:
        plus_vec, minus_vec = psi, phi
    else:
        plus_vec, minus_vec = phi, psi
    pairing = float(phi @ psi)
    worst = 0.0
    # the products are block diagonal per degree, so probe degree by degree
    for n in range(ctx.max_degree):
        down = _annihilation_block(phi, n + 1, d, q) @ _creation_block(psi, n + 1, d)
        if n == 0:
            up = np.zeros((1, 1))
        else:
            up = _creation_block(plus_vec, n, d) @ _annihilation_block(minus_vec, n, d, q)
        block = down - q * up - pairing * np.eye(d**n)
        worst = max(worst, float(np.linalg.norm(block, 2)))
    return worst


def pq_spectrum(n: int, ctx: QContext, cap: int = EIGENSOLVER_CAP) -> tuple[float, float]:
    """Extreme eigenvalues of the degree-n symmetrizer (a symmetric matrix)."""
    size = ctx.dim**n
    if size > cap:
        raise ValueError(f"eigensolver capped at dimension {cap}, got {size}")
    eigs = np.linalg.eigvalsh(np.asarray(pq_matrix(n, ctx.dim, ctx.q)))
    return float(eigs[0]), float(eigs[-1])
