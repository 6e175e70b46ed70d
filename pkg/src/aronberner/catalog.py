"""Named example maps, each available as a finite tensor and as a sequence-space model.

The triangular family is a constructed witness family (0/1 values on unit
vectors, so every iterated limit is exact); it is not taken from the
literature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .limits import NetFamily, SequenceModelMap, constant_net, unit_vector_net
from .signatures import Signature
from .tensor import BilinearTensor, TrilinearTensor, compose_bilinear

PATTERNS = ("ijk", "ikj", "jik", "jki", "kij", "kji")


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    construction: str
    finite_dim_instance: Callable[[int], TrilinearTensor] = field(repr=False, compare=False)
    sequence_instance: Callable[[int], SequenceModelMap] = field(repr=False, compare=False)
    nets: Callable[[int], list[NetFamily]] = field(repr=False, compare=False)
    description: str = ""


@dataclass(frozen=True)
class BilinearExample:
    """Bilinear ingredient for ``composed``: tensor at truncation ``n`` plus a broadcasting evaluator."""

    name: str
    tensor: Callable[[int], BilinearTensor] = field(repr=False, compare=False)
    evaluator: Callable[[int], Callable] = field(repr=False, compare=False)
    dims: Callable[[int], tuple[int, int, int]] = field(repr=False, compare=False)
    nets: Callable[[int], list[NetFamily]] = field(repr=False, compare=False)


def _sequence(values, n: int) -> np.ndarray:
    if callable(values):
        arr = np.array([values(k) for k in range(1, n + 1)], dtype=float)
    else:
        arr = np.asarray(values, dtype=float)[:n]
        if len(arr) < n:
            raise ValueError(f"sequence has {len(arr)} terms, truncation needs {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence entries must be finite")
    return arr


# -- triangular forms -----------------------------------------------------------


def _check_pattern(pattern: str):
    if pattern not in PATTERNS:
        raise ValueError(f"pattern must be one of {PATTERNS}, got {pattern!r}")


def _triangular_eval(pattern: str):
    # pattern "ijk" means i <= j <= k; sum over the middle index m of
    # v_m * (sum of the lowest variable up to m) * (sum of the highest from m on)
    low, mid, high = ("ijk".index(c) for c in pattern)

    def ev(x, y, z):
        args = np.broadcast_arrays(x, y, z)
        below = np.cumsum(args[low], axis=-1)
        above = np.cumsum(args[high][..., ::-1], axis=-1)[..., ::-1]
        return np.sum(args[mid] * below * above, axis=-1)[..., None]

    return ev


def triangular_mask(pattern: str, n: int) -> np.ndarray:
    _check_pattern(pattern)
    idx = np.indices((n, n, n))
    low, mid, high = (idx["ijk".index(c)] for c in pattern)
    return ((low <= mid) & (mid <= high)).astype(float)


def triangular(pattern: str = "ijk") -> ExampleSpec:
    """``f(x, y, z) = sum of x_i y_j z_k over index triples ordered by ``pattern``."""
    _check_pattern(pattern)
    ev = _triangular_eval(pattern)
    return ExampleSpec(
        name=f"triangular-{pattern}",
        construction=f"triangular({pattern})",
        finite_dim_instance=lambda n: TrilinearTensor(
            triangular_mask(pattern, n)[..., None], Signature.of("X", "Y", "Z", "W")
        ),
        sequence_instance=lambda n: SequenceModelMap(f"triangular-{pattern}", ev, (n, n, n, 1)),
        nets=lambda n: [unit_vector_net(n)] * 3,
        description=f"sum over {pattern[0]}<={pattern[1]}<={pattern[2]} of x_i y_j z_k",
    )


def fingerprint(pattern: str) -> str:
    """Order (ascii, outermost first) expected to give 1 on unit-vector nets."""
    return "".join("abc"["ijk".index(c)] for c in pattern)


# -- rank one -------------------------------------------------------------------


def rank_one(phi=lambda n: 1.0 - 1.0 / n, psi=lambda n: 1.0) -> ExampleSpec:
    """``f(x1, x2, x3) = <phi, x1> <psi, x2> x3``, sequence valued."""

    def seq(n):
        a, b = _sequence(phi, n), _sequence(psi, n)

        def ev(x, y, z):
            return (np.tensordot(x, a, axes=1) * np.tensordot(y, b, axes=1))[..., None] * z

        return SequenceModelMap("rank-one", ev, (n, n, n, n))

    def fin(n):
        a, b = _sequence(phi, n), _sequence(psi, n)
        T = np.einsum("i,j,kl->ijkl", a, b, np.eye(n))
        return TrilinearTensor(T, Signature.of("X", "Y", "Z", "W"))

    return ExampleSpec(
        "rank-one", "rank-one(phi, psi)", fin, seq,
        nets=lambda n: [unit_vector_net(n)] * 3,
        description="<phi,x1><psi,x2> x3",
    )


# -- bilinear ingredients and composition ------------------------------------------


def rank_one_bilinear(phi=lambda n: 1.0 - 1.0 / n, psi=lambda n: 1.0, sigma_index: int = 1):
    """``m(x, y) = <phi, x> <psi, y> e_sigma`` into a sequence space (Arens regular)."""

    def tensor(n):
        a, b = _sequence(phi, n), _sequence(psi, n)
        e = np.zeros(n)
        e[sigma_index - 1] = 1.0
        return BilinearTensor(np.einsum("i,j,p->ijp", a, b, e), Signature.of("X", "Y", "S"))

    def evaluator(n):
        a, b = _sequence(phi, n), _sequence(psi, n)
        e = np.zeros(n)
        e[sigma_index - 1] = 1.0

        def ev(x, y):
            return (np.tensordot(x, a, axes=1) * np.tensordot(y, b, axes=1))[..., None] * e

        return ev

    return BilinearExample(
        "rank-one-bilinear", tensor, evaluator, lambda n: (n, n, n),
        nets=lambda n: [unit_vector_net(n)] * 2,
    )


def functional_times_vector(chi=lambda n: 1.0):
    """``g(s, z) = <chi, s> z`` from ``S x Z`` into ``W`` (Arens regular)."""

    def tensor(n):
        c = _sequence(chi, n)
        return BilinearTensor(np.einsum("p,kl->pkl", c, np.eye(n)), Signature.of("S", "Z", "W"))

    def evaluator(n):
        c = _sequence(chi, n)

        def ev(s, z):
            return np.tensordot(s, c, axes=1)[..., None] * z

        return ev

    return BilinearExample(
        "functional-times-vector", tensor, evaluator, lambda n: (n, n, n),
        nets=lambda n: [None, unit_vector_net(n)],
    )


def triangular_bilinear():
    """``m(x, y) = sum over i <= j of x_i y_j``, scalar valued (not Arens regular)."""

    def tensor(n):
        M = np.triu(np.ones((n, n)))[..., None]
        return BilinearTensor(M, Signature.of("X", "Y", "S"))

    def evaluator(n):
        def ev(x, y):
            x, y = np.broadcast_arrays(x, y)
            return np.sum(np.cumsum(x, axis=-1) * y, axis=-1)[..., None]

        return ev

    return BilinearExample(
        "triangular-bilinear", tensor, evaluator, lambda n: (n, n, 1),
        nets=lambda n: [unit_vector_net(n)] * 2,
    )


def scalar_multiplication():
    """``g(lam, z) = lam * z`` from ``R x Z`` into ``W = Z``."""

    def tensor(n):
        return BilinearTensor(np.eye(n)[None, ...], Signature.of("S", "Z", "W"))

    def evaluator(n):
        def ev(s, z):
            return s[..., :1] * z

        return ev

    return BilinearExample(
        "scalar-multiplication", tensor, evaluator, lambda n: (1, n, n),
        nets=lambda n: [None, unit_vector_net(n)],
    )


def composed(g_spec: BilinearExample, m_spec: BilinearExample, name: str | None = None) -> ExampleSpec:
    """``f(x, y, z) = g(m(x, y), z)`` in both backends."""
    name = name or f"composed({g_spec.name},{m_spec.name})"

    def check(n):
        if m_spec.dims(n)[2] != g_spec.dims(n)[0]:
            raise ValueError(
                f"{m_spec.name} lands in dimension {m_spec.dims(n)[2]}, "
                f"{g_spec.name} expects {g_spec.dims(n)[0]}"
            )

    def fin(n):
        check(n)
        return compose_bilinear(g_spec.tensor(n), m_spec.tensor(n))

    def seq(n):
        check(n)
        m_ev, g_ev = m_spec.evaluator(n), g_spec.evaluator(n)
        mx, my, _ = m_spec.dims(n)
        _, gz, gw = g_spec.dims(n)

        def ev(x, y, z):
            return g_ev(m_ev(x, y), z)

        return SequenceModelMap(name, ev, (mx, my, gz, gw))

    def nets(n):
        return m_spec.nets(n) + [g_spec.nets(n)[1]]

    return ExampleSpec(name, f"composed({g_spec.name}, {m_spec.name})", fin, seq, nets)


def reflexive_middle() -> ExampleSpec:
    """``f(x, lam, z) = lam * sum over i <= k of x_i z_k`` with a one-dimensional middle space."""

    def ev(x, lam, z):
        x, z = np.broadcast_arrays(x, z)
        return (lam[..., 0] * np.sum(np.cumsum(x, axis=-1) * z, axis=-1))[..., None]

    def fin(n):
        T = np.triu(np.ones((n, n)))[:, None, :, None]
        return TrilinearTensor(T, Signature.of("X", "Y", "Z", "W"))

    return ExampleSpec(
        "reflexive-middle", "reflexive-middle(i<=k)", fin,
        lambda n: SequenceModelMap("reflexive-middle", ev, (n, 1, n, 1)),
        nets=lambda n: [unit_vector_net(n), constant_net([1.0], "1"), unit_vector_net(n)],
        description="lam * sum_{i<=k} x_i z_k, Y = R",
    )


def _composed_regular():
    return composed(functional_times_vector(), rank_one_bilinear(), "composed-regular")


def _composed_irregular():
    return composed(scalar_multiplication(), triangular_bilinear(), "composed-irregular")


CATALOG: dict[str, Callable[[], ExampleSpec]] = {
    **{f"triangular-{p}": (lambda p=p: triangular(p)) for p in PATTERNS},
    "rank-one": rank_one,
    "composed-regular": _composed_regular,
    "composed-irregular": _composed_irregular,
    "reflexive-middle": reflexive_middle,
}

PRIMARY_NAMES = ("triangular-ijk", "rank-one", "composed-regular", "composed-irregular", "reflexive-middle")


def get(name: str) -> ExampleSpec:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(CATALOG)}") from None


def names() -> Sequence[str]:
    return tuple(CATALOG)
