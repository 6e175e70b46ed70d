"""Dense coordinate tensors for bilinear and tri-linear maps on finite-dimensional spaces.

Entry ``[i, j, k, l]`` of a tri-linear tensor is the ``l``-th coordinate of
``f(e_i, e_j, e_k)``; a bilinear tensor drops the third argument axis.  A space
and its bidual share coordinates, so adjoints and flips are pure axis
rearrangements and every identity built from them holds bit for bit.

Evaluation contracts the last argument first, then the one before it, and so
on (``tensordot`` over the trailing argument axis each time).  That order is
fixed so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signatures import (
    CANONICAL,
    FLIPS,
    STAR,
    Flip,
    Signature,
    Space,
    Word,
    as_flip,
    as_word,
    bilinear_word_signature,
    flip_signature,
    reverse_signature,
    signature_step,
    star_signature,
)

MAX_DIM = 16
RELATIVE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Vector:
    coords: np.ndarray
    space: Space

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 1:
            raise ValueError("vector coordinates must be one-dimensional")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)


class _CoordinateTensor:
    """Immutable dense tensor plus the signature of the map it represents."""

    arity = 0
    __slots__ = ("entries", "sig")

    def __init__(self, entries, sig: Signature):
        entries = np.array(entries, dtype=float)
        if entries.ndim != self.arity + 1:
            raise ValueError(f"expected {self.arity + 1} axes, got {entries.ndim}")
        if 0 in entries.shape:
            raise ValueError("dimensions must be positive")
        if not np.all(np.isfinite(entries)):
            raise ValueError("tensor entries must be finite")
        if sig.arity != self.arity:
            raise ValueError(f"signature {sig} does not have arity {self.arity}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "sig", sig)

    @classmethod
    def _wrap(cls, entries: np.ndarray, sig: Signature):
        # entries already validated: a read-only view of a validated array
        T = object.__new__(cls)
        object.__setattr__(T, "entries", entries)
        object.__setattr__(T, "sig", sig)
        return T

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.entries.shape

    def __call__(self, *vectors: Vector) -> Vector:
        return evaluate(self, *vectors)

    def __repr__(self):
        return f"{type(self).__name__}(dims={self.dims}, sig='{self.sig}')"


class TrilinearTensor(_CoordinateTensor):
    arity = 3
    __slots__ = ()

    def __init__(self, entries, sig: Signature = CANONICAL):
        super().__init__(entries, sig)


class BilinearTensor(_CoordinateTensor):
    arity = 2
    __slots__ = ()

    def __init__(self, entries, sig: Signature | None = None):
        super().__init__(entries, sig or Signature.of("X", "Y", "S"))


def _rebuild(T, entries, sig):
    return type(T)._wrap(entries, sig)


def random_trilinear(rng: np.random.Generator, dims, sig: Signature = CANONICAL) -> TrilinearTensor:
    """Entries uniform in [-1, 1]."""
    return TrilinearTensor(rng.uniform(-1.0, 1.0, size=tuple(dims)), sig)


def random_bilinear(rng: np.random.Generator, dims, sig: Signature | None = None) -> BilinearTensor:
    return BilinearTensor(rng.uniform(-1.0, 1.0, size=tuple(dims)), sig)


def vector(coords, space: Space | str) -> Vector:
    if isinstance(space, str):
        from .signatures import parse_space

        space = parse_space(space)
    return Vector(np.asarray(coords, dtype=float), space)


def evaluate(T: _CoordinateTensor, *vectors: Vector) -> Vector:
    if len(vectors) != T.arity:
        raise ValueError(f"expected {T.arity} arguments, got {len(vectors)}")
    for slot, (v, space, dim) in enumerate(zip(vectors, T.sig.args, T.dims), 1):
        if not v.space.same_coordinates(space):
            raise ValueError(f"slot {slot}: vector in {v.space} does not belong to {space}")
        if len(v) != dim:
            raise ValueError(f"slot {slot}: dimension mismatch, expected {dim}, got {len(v)}")
    out = T.entries
    for v in reversed(vectors):
        # out has the argument axes first; contract the last remaining one
        out = np.tensordot(out, v.coords, axes=([out.ndim - 2], [0]))
    return Vector(out, T.sig.codomain)


def pairing(a: Vector, b: Vector) -> float:
    """Duality pairing of a vector with one from the dual space."""
    if a.space.base != b.space.base or (a.space.dual_level - b.space.dual_level) % 2 != 1:
        raise ValueError(f"cannot pair {a.space} with {b.space}")
    if len(a) != len(b):
        raise ValueError("dimension mismatch in pairing")
    return float(np.dot(a.coords, b.coords))


_STAR_AXES = {2: (2, 0, 1), 3: (3, 0, 1, 2)}
_FLIP_AXES = {name: f.perm + (3,) for name, f in FLIPS.items()}


def adjoint(T):
    """``<T*(d, a, b), c> = <d, T(a, b, c)>``: the codomain axis moves to the front."""
    return _rebuild(T, T.entries.transpose(_STAR_AXES[T.arity]), star_signature(T.sig))


def flip(T: TrilinearTensor, which: Flip | str) -> TrilinearTensor:
    which = as_flip(which)
    sig = flip_signature(T.sig, which)
    return TrilinearTensor._wrap(T.entries.transpose(which.perm + (3,)), sig)


def _letter(T: TrilinearTensor, letter: str) -> TrilinearTensor:
    axes = _STAR_AXES[3] if letter == STAR else _FLIP_AXES[letter]
    return TrilinearTensor._wrap(T.entries.transpose(axes), signature_step(T.sig, letter))


def reverse(M: BilinearTensor) -> BilinearTensor:
    """Bilinear flip ``m^r(y, x) = m(x, y)``."""
    return BilinearTensor._wrap(np.transpose(M.entries, (1, 0, 2)), reverse_signature(M.sig))


def apply_word(T: TrilinearTensor, w: Word | str) -> TrilinearTensor:
    if T.arity != 3:
        raise ValueError("apply_word needs a tri-linear tensor; use apply_bilinear_word")
    for letter in as_word(w).letters:
        T = _letter(T, letter)
    return T


def apply_bilinear_word(M: BilinearTensor, w: Word | str) -> BilinearTensor:
    w = as_word(w)
    bilinear_word_signature(M.sig, w)  # rejects letters other than * and r
    for letter in w.letters:
        M = adjoint(M) if letter == STAR else reverse(M)
    return M


def compose_bilinear(g: BilinearTensor, m: BilinearTensor) -> TrilinearTensor:
    """Tensor of ``f(x, y, z) = g(m(x, y), z)``."""
    if m.dims[2] != g.dims[0]:
        raise ValueError(
            f"inner dimension mismatch: m has codomain dim {m.dims[2]}, g expects {g.dims[0]}"
        )
    if not m.sig.codomain.same_coordinates(g.sig.args[0]):
        raise ValueError(f"codomain {m.sig.codomain} of m does not feed {g.sig.args[0]}")
    entries = np.tensordot(m.entries, g.entries, axes=([2], [0]))
    sig = Signature((m.sig.args[0], m.sig.args[1], g.sig.args[1]), g.sig.codomain)
    return TrilinearTensor(entries, sig)


# -- identity checks ---------------------------------------------------------


def relative_distance(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - b) / scale)


def same_tensor(A, B, tol: float | None = None) -> bool:
    """Entrywise equality; bitwise when ``tol`` is None.  Signatures are compared up to
    even dual-level collapse."""
    if A.dims != B.dims or A.sig.collapsed() != B.sig.collapsed():
        return False
    if tol is None:
        return bool(np.array_equal(A.entries, B.entries))
    return relative_distance(A.entries, B.entries) <= tol


def _composition_sides(g, m, f_word, g_word, m_word):
    f = compose_bilinear(g, m)
    lhs = apply_word(f, f_word)
    rhs = compose_bilinear(apply_bilinear_word(g, g_word), apply_bilinear_word(m, m_word))
    return lhs, rhs


def check_identity_2_4(g: BilinearTensor, m: BilinearTensor, tol: float = RELATIVE_TOL) -> bool:
    """``f^{i****i}(x, y, z) = g^{***}(m^{r***r}(x, y), z)``."""
    lhs, rhs = _composition_sides(g, m, "i****i", "***", "r***r")
    return lhs.sig == rhs.sig and same_tensor(lhs, rhs, tol)


def check_identity_2_5(g: BilinearTensor, m: BilinearTensor, tol: float = RELATIVE_TOL) -> bool:
    """``f^{r****r}(x, y, z) = g^{r***r}(m^{r***r}(x, y), z)``."""
    lhs, rhs = _composition_sides(g, m, "r****r", "r***r", "r***r")
    return lhs.sig == rhs.sig and same_tensor(lhs, rhs, tol)


def check_identity_2_6(g: BilinearTensor, m: BilinearTensor, tol: float = RELATIVE_TOL) -> bool:
    """``f^{j****j}(x, y, z) = g^{***}(m^{***}(x, y), z)``."""
    lhs, rhs = _composition_sides(g, m, "j****j", "***", "***")
    return lhs.sig == rhs.sig and same_tensor(lhs, rhs, tol)


MIXED_WORD_PAIRS = (("****s**t", "s**t****"), ("t**s****", "****t**s"))


def check_mixed_word_identities(T: TrilinearTensor) -> bool:
    return all(same_tensor(apply_word(T, a), apply_word(T, b)) for a, b in MIXED_WORD_PAIRS)


# -- fixture files -----------------------------------------------------------


def to_document(T) -> dict:
    return {
        "arity": T.arity,
        "dims": list(T.dims),
        "entries": [float(x) for x in np.ravel(T.entries, order="C")],
        "sig": str(T.sig),
    }


def from_document(doc: dict):
    from .signatures import parse_space

    arity = int(doc["arity"])
    dims = tuple(int(d) for d in doc["dims"])
    if len(dims) != arity + 1:
        raise ValueError(f"arity {arity} needs {arity + 1} dims, got {len(dims)}")
    entries = np.asarray(doc["entries"], dtype=float)
    if entries.size != int(np.prod(dims)):
        raise ValueError(f"expected {int(np.prod(dims))} entries, got {entries.size}")
    lhs, _, rhs = doc["sig"].partition(" -> ")
    spaces = [parse_space(s.strip()) for s in lhs.split(" x ")] + [parse_space(rhs.strip())]
    sig = Signature(tuple(spaces[:-1]), spaces[-1])
    cls = TrilinearTensor if arity == 3 else BilinearTensor
    return cls(entries.reshape(dims), sig)
