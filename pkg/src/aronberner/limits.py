"""Iterated weak*-limit model on truncated sequence spaces.

Each of the six natural extensions of a tri-linear map is an iterated limit
over the three nets in one of six orders.  Nets are explicit index families of
truncated vectors, a map is a vectorised evaluator on those vectors, and every
limit is read off the tail of a finite scan.

Layer ranges: the innermost index runs up to ``N``, the middle one up to
``N - H`` and the outermost up to ``N - 2H``, so every layer has ``H`` samples
beyond the indices it is evaluated for.  A layer settles when its last ``H``
samples are identical (stabilized), span at most ``tol`` (Cauchy), or when the
first-order Richardson transform ``n*s_n - (n-1)*s_(n-1)`` does (for
sequences approaching their limit like ``1/n``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .signatures import (
    CANONICAL_ORDERS,
    NET_LETTERS,
    ORDER_WORD,
    ExtensionOrder,
    Flip,
    as_flip,
)

DEFAULT_N = 50
DEFAULT_H = 10
DEFAULT_TOL = 1e-9

STABILIZED = "stabilized"
CONVERGED = "converged-within-tol"
FAILED = "failed"

REGULAR = "aron-berner-regular-evidence"
CLOSE_TO_REGULAR = "close-to-regular-evidence"
IRREGULAR = "irregular"

# status codes inside the vectorised scans, worst wins
_EXACT, _CAUCHY, _RICHARDSON, _FAIL = 0, 1, 2, 3
_METHOD = {_EXACT: "exact", _CAUCHY: "cauchy", _RICHARDSON: "richardson"}

ORDER_TGAMMA = ExtensionOrder((2, 0, 1))  # f^{t****s}
ORDER_SBETA = ExtensionOrder((1, 2, 0))  # f^{s****t}


class LimitError(RuntimeError):
    pass


# -- nets ---------------------------------------------------------------------


@dataclass(frozen=True)
class NetFamily:
    """Index family ``n -> vector`` (``n`` starts at 1) standing in for a w*-convergent net."""

    kind: str
    dim: int
    generator: Callable[[int], np.ndarray] = field(repr=False, compare=False)
    label: str = ""

    def __call__(self, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("net indices start at 1")
        return np.asarray(self.generator(n), dtype=float)

    def matrix(self, count: int) -> np.ndarray:
        """Rows are the vectors for indices ``1..count``."""
        return np.stack([self(n) for n in range(1, count + 1)])


def unit_vector_net(N: int) -> NetFamily:
    def gen(n):
        if n > N:
            raise ValueError(f"unit vector e_{n} is outside the truncation {N}")
        v = np.zeros(N)
        v[n - 1] = 1.0
        return v

    return NetFamily("unit-vector", N, gen, "e_n")


def cesaro_net(N: int) -> NetFamily:
    def gen(n):
        if n > N:
            raise ValueError(f"index {n} is outside the truncation {N}")
        v = np.zeros(N)
        v[:n] = 1.0 / n
        return v

    return NetFamily("cesaro", N, gen, "(e_1+...+e_n)/n")


def constant_net(v, label: str = "") -> NetFamily:
    v = np.array(v, dtype=float).ravel()
    v.setflags(write=False)
    return NetFamily("constant", len(v), lambda n: v, label or f"const{tuple(v.tolist())}")


def table_net(rows) -> NetFamily:
    rows = np.array(rows, dtype=float)
    if rows.ndim != 2:
        raise ValueError("a net table needs one row per index")

    def gen(n):
        if n > len(rows):
            raise ValueError(f"index {n} is beyond the {len(rows)} tabulated rows")
        return rows[n - 1]

    return NetFamily("custom-table", rows.shape[1], gen, "table")


# -- maps ---------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceModelMap:
    """A tri-linear map on truncated sequence spaces.

    ``evaluator(x, y, z)`` broadcasts over leading axes and returns an array with
    one trailing codomain axis (length 1 for scalar maps).  ``dims`` are the
    argument and codomain dimensions.
    """

    name: str
    evaluator: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] = field(
        repr=False, compare=False
    )
    dims: tuple[int, int, int, int]

    @property
    def codomain_kind(self) -> str:
        return "scalar" if self.dims[3] == 1 else "sequence"

    def __call__(self, x, y, z) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(x), np.asarray(y), np.asarray(z)))

    def cube(self, X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
        """Values at every index triple: shape ``(len(X), len(Y), len(Z), dim W)``."""
        for slot, (A, d) in enumerate(zip((X, Y, Z), self.dims), 1):
            if A.shape[1] != d:
                raise ValueError(f"slot {slot}: net vectors have length {A.shape[1]}, map expects {d}")
        out = self(X[:, None, None, :], Y[None, :, None, :], Z[None, None, :, :])
        if not np.all(np.isfinite(out)):
            raise ValueError(f"{self.name}: evaluator produced non-finite values")
        return out

    def flipped(self, which: Flip | str) -> SequenceModelMap:
        """``f^flip``: slot ``k`` receives what ``f`` takes in slot ``flip.perm[k]``."""
        which = as_flip(which)
        inv = [which.perm.index(role) for role in range(3)]

        def ev(*u):
            return self.evaluator(*(u[k] for k in inv))

        dims = tuple(self.dims[r] for r in which.perm) + (self.dims[3],)
        return SequenceModelMap(f"{self.name}^{which.name}", ev, dims)


@dataclass(frozen=True)
class Functionals:
    """Finite family of test functionals on the codomain, one per row."""

    matrix: np.ndarray = field(compare=False)
    labels: tuple[str, ...]

    def __len__(self):
        return len(self.labels)


def default_functionals(dim: int, N: int = DEFAULT_N, H: int = DEFAULT_H) -> Functionals:
    """Scalar maps: the value itself.  Sequence maps: coordinates ``1..N-3H`` and the sum.

    Coordinates past ``N - 3H`` would put their single nonzero sample inside the
    final detection window of the outermost layer, where no limit can be read.
    """
    if dim == 1:
        return Functionals(np.ones((1, 1)), ("value",))
    count = min(dim, N - 3 * H)
    rows = np.zeros((count + 1, dim))
    rows[np.arange(count), np.arange(count)] = 1.0
    rows[count] = 1.0
    labels = tuple(f"coord[{q + 1}]" for q in range(count)) + ("sum",)
    return Functionals(rows, labels)


# -- limits ---------------------------------------------------------------------


@dataclass(frozen=True)
class LimitResult:
    """Outcome of one iterated limit.

    ``value`` holds one number per test functional.  ``stabilization_indices``
    follows the order (outermost first); inner layers report the largest index
    over all fixed outer indices.  ``stabilization_index`` is the outermost one.
    """

    order: ExtensionOrder
    status: str
    value: tuple[float, ...] | None = None
    stabilization_indices: tuple[int, int, int] | None = None
    methods: tuple[str, str, str] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    @property
    def stabilization_index(self) -> int | None:
        return None if self.stabilization_indices is None else self.stabilization_indices[0]

    @property
    def scalar(self) -> float:
        if self.value is None:
            raise LimitError(self.error or "limit failed")
        if len(self.value) != 1:
            raise ValueError("sequence-valued limit has no single scalar value")
        return self.value[0]


def _settle(A: np.ndarray, H: int, tol: float):
    """Limit along the last axis of ``A`` from its last ``H`` samples."""
    n = A.shape[-1]
    tail = A[..., n - H:]
    last = A[..., -1]
    exact = np.all(tail == last[..., None], axis=-1)
    # earliest 1-based index from which the sequence equals its last sample
    differs = (A != last[..., None])[..., ::-1]
    run = np.where(differs.any(axis=-1), differs.argmax(axis=-1), n)
    stab = n - run + 1

    cauchy = np.ptp(tail, axis=-1) <= tol
    k = np.arange(1, n + 1, dtype=float)
    rich = k[1:] * A[..., 1:] - k[:-1] * A[..., :-1]
    rich_ok = np.ptp(rich[..., -H:], axis=-1) <= tol

    status = np.full(last.shape, _FAIL)
    status[rich_ok] = _RICHARDSON
    status[cauchy] = _CAUCHY
    status[exact] = _EXACT
    value = np.where(status == _RICHARDSON, rich[..., -1], last)
    return value, status, stab


def _order_message(order: ExtensionOrder, layer: int, fixed, functional: str) -> str:
    names = [NET_LETTERS[k] for k in order.order]
    pinned = ", ".join(f"{nm}={i}" for nm, i in zip(names[:layer - 1], fixed))
    where = f" with {pinned}" if pinned else ""
    return (
        f"no stabilization at layer {layer} ({names[layer - 1]}){where}"
        f" on functional {functional}"
    )


def limit_of_cube(
    cube: np.ndarray,
    order: ExtensionOrder,
    H: int,
    tol: float,
    labels: Sequence[str] = ("value",),
) -> LimitResult:
    """Iterated limit of a reduced value cube ``(N, N, N, K)`` indexed (α, β, γ, functional)."""
    N = max(cube.shape[:3])
    outer, middle, inner = order.order
    A = np.transpose(cube, (3, outer, middle, inner))
    A = A[:, : N - 2 * H, : N - H, :N]

    indices, methods = [], []
    for layer in (3, 2, 1):
        if A.shape[-1] == 1:
            # constant net
            value, status, stab = A[..., 0], np.zeros(A.shape[:-1], int), np.ones(A.shape[:-1], int)
        else:
            value, status, stab = _settle(A, H, tol)
        if np.any(status == _FAIL):
            bad = tuple(int(i) for i in np.argwhere(status == _FAIL)[0])
            fixed = tuple(i + 1 for i in bad[1:])
            msg = _order_message(order, layer, fixed, labels[bad[0]])
            return LimitResult(order, FAILED, error=msg)
        indices.append(int(stab.max()) if np.all(status == _EXACT) else int(A.shape[-1] - H + 1))
        methods.append(_METHOD[int(status.max())])
        A = value
    indices.reverse()
    methods.reverse()
    st = STABILIZED if all(m == "exact" for m in methods) else CONVERGED
    return LimitResult(order, st, tuple(float(v) for v in A), tuple(indices), tuple(methods))


def _check_params(N: int, H: int, tol: float):
    if H < 1:
        raise ValueError("horizon H must be at least 1")
    if N < 3 * H:
        raise ValueError(f"truncation N={N} must be at least 3H={3 * H}")
    if not tol > 0:
        raise ValueError("tolerance must be positive")


def reduced_cube(f: SequenceModelMap, nets: Sequence[NetFamily], N: int, functionals: Functionals):
    mats = [net.matrix(N) for net in nets]
    return np.tensordot(f.cube(*mats), functionals.matrix, axes=([3], [1]))


def iterated_limit(
    f: SequenceModelMap,
    nets: Sequence[NetFamily],
    order: ExtensionOrder | str,
    N: int = DEFAULT_N,
    H: int = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    functionals: Functionals | None = None,
) -> LimitResult:
    """``lim_outer lim_middle lim_inner f(x_α, y_β, z_γ)`` tested against ``functionals``."""
    _check_params(N, H, tol)
    if isinstance(order, str):
        order = ExtensionOrder.parse(order)
    functionals = functionals or default_functionals(f.dims[3], N, H)
    return limit_of_cube(reduced_cube(f, nets, N, functionals), order, H, tol, functionals.labels)


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class Probe:
    """An evaluation point: slots listed in ``pins`` use the fixed net member ``x_n``."""

    pins: tuple[tuple[int, int], ...] = ()

    @property
    def label(self) -> str:
        if not self.pins:
            return "nets"
        names = "xyz"
        return ",".join(f"{names[s]}={names[s]}_{n}" for s, n in self.pins)


def default_probes(pin_indices: Sequence[int] = (1, 2)) -> tuple[Probe, ...]:
    """The all-nets point, then every point with one or two slots pinned to a net member.

    Elements of a space sit inside its bidual, so the extensions must also agree
    there; pinning keeps the comparison from resting on a single point.
    """
    probes = [Probe()]
    for size in (1, 2):
        for slots in itertools.combinations(range(3), size):
            for idx in itertools.product(pin_indices, repeat=size):
                probes.append(Probe(tuple(zip(slots, idx))))
    return tuple(probes)


def pinned_nets(nets: Sequence[NetFamily], probe: Probe) -> list[NetFamily]:
    out = list(nets)
    for slot, n in probe.pins:
        out[slot] = constant_net(nets[slot](n), f"{nets[slot].label}@{n}")
    return out


def _pinned_cube(cube: np.ndarray, probe: Probe) -> np.ndarray:
    # a slot pinned to x_n sees the constant net x_n: keep the slice at n as a
    # length-one axis, which limit_of_cube treats as a constant sequence
    for slot, n in probe.pins:
        cube = np.take(cube, [n - 1], axis=slot)
    return cube


@dataclass(frozen=True)
class ExtensionReport:
    map_name: str
    results: tuple[LimitResult, ...]  # one per order in CANONICAL_ORDERS, all-nets point
    probe_results: tuple[tuple[Probe, tuple[LimitResult, ...]], ...]
    functionals: tuple[str, ...]
    N: int
    H: int
    tol: float
    classification: str | None = None
    witness: tuple[ExtensionOrder, ExtensionOrder, str] | None = None

    def result(self, order: ExtensionOrder | str) -> LimitResult:
        if isinstance(order, str):
            order = ExtensionOrder.parse(order)
        return self.results[CANONICAL_ORDERS.index(order)]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for _, rs in self.probe_results for r in rs)

    def agree(self, a: ExtensionOrder, b: ExtensionOrder) -> bool | None:
        """Equality of two extensions on every probe and functional; None if undecidable."""
        verdict = True
        for _, rs in self.probe_results:
            ra, rb = rs[CANONICAL_ORDERS.index(a)], rs[CANONICAL_ORDERS.index(b)]
            if not (ra.ok and rb.ok):
                verdict = None
                continue
            if max(abs(u - v) for u, v in zip(ra.value, rb.value)) > self.tol:
                return False
        return verdict

    @property
    def close_to_regular(self) -> bool | None:
        return self.agree(ORDER_TGAMMA, ORDER_SBETA)


def _differ(ra: LimitResult, rb: LimitResult, tol: float) -> bool:
    return ra.ok and rb.ok and max(abs(u - v) for u, v in zip(ra.value, rb.value)) > tol


def classify(report: ExtensionReport) -> tuple[str | None, tuple | None]:
    """Classification and witness from the stored limit results (a pure function)."""
    witness = None
    for probe, rs in report.probe_results:
        for p, q in itertools.combinations(range(6), 2):
            if _differ(rs[p], rs[q], report.tol):
                witness = (CANONICAL_ORDERS[p], CANONICAL_ORDERS[q], probe.label)
                break
        if witness:
            break
    if witness is None:
        return (REGULAR, None) if report.all_ok else (None, None)
    if report.close_to_regular:
        return CLOSE_TO_REGULAR, witness
    return IRREGULAR, witness


def _with_classification(report: ExtensionReport) -> ExtensionReport:
    cls, witness = classify(report)
    return ExtensionReport(
        report.map_name, report.results, report.probe_results, report.functionals,
        report.N, report.H, report.tol, cls, witness,
    )


def six_extensions(
    f: SequenceModelMap,
    nets: Sequence[NetFamily],
    N: int = DEFAULT_N,
    H: int = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    functionals: Functionals | None = None,
    probes: Sequence[Probe] | None = None,
) -> ExtensionReport:
    _check_params(N, H, tol)
    functionals = functionals or default_functionals(f.dims[3], N, H)
    probes = default_probes() if probes is None else tuple(probes)
    if not probes or probes[0].pins:
        probes = (Probe(),) + tuple(p for p in probes if p.pins)

    table = []
    full = reduced_cube(f, nets, N, functionals)
    for probe in probes:
        cube = _pinned_cube(full, probe)
        rs = tuple(limit_of_cube(cube, o, H, tol, functionals.labels) for o in CANONICAL_ORDERS)
        table.append((probe, rs))
    report = ExtensionReport(
        f.name, table[0][1], tuple(table), functionals.labels, N, H, tol
    )
    return _with_classification(report)


@dataclass(frozen=True)
class FlipVerdict:
    flip: Flip
    close_to_regular: bool | None
    report: ExtensionReport

    def __bool__(self):
        return bool(self.close_to_regular)


def close_to_regular_of_flip(
    f: SequenceModelMap,
    which: Flip | str,
    nets: Sequence[NetFamily],
    N: int = DEFAULT_N,
    H: int = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    functionals: Functionals | None = None,
    probes: Sequence[Probe] | None = None,
) -> FlipVerdict:
    """Is ``f^flip`` close-to-regular on these nets?"""
    which = as_flip(which)
    flipped_nets = [nets[r] for r in which.perm]
    report = six_extensions(f.flipped(which), flipped_nets, N, H, tol, functionals, probes)
    return FlipVerdict(which, report.close_to_regular, report)


def theorem21_consistency(report: ExtensionReport) -> bool:
    """Both regularity criteria agree with the six-way comparison.

    ``{γαβ, αβγ, βγα}`` all equal iff all six equal, and likewise for
    ``{βαγ, αγβ, γβα}``.  False means the harness is numerically inconsistent.
    """
    if not report.all_ok:
        raise LimitError("theorem21_consistency needs every order to succeed")

    def all_equal(orders):
        return all(report.agree(a, b) for a, b in itertools.combinations(orders, 2))

    first = [ExtensionOrder.parse(s) for s in ("cab", "abc", "bca")]
    second = [ExtensionOrder.parse(s) for s in ("bac", "acb", "cba")]
    six = all_equal(CANONICAL_ORDERS)
    return all_equal(first) == six and all_equal(second) == six


# -- report documents ---------------------------------------------------------


def report_document(report: ExtensionReport, consistent: bool | None = None) -> dict:
    """Deterministic structured form of a report (field order fixed)."""

    def res(r: LimitResult) -> dict:
        return {
            "order": str(r.order),
            "word": ORDER_WORD[r.order],
            "status": r.status,
            "value": list(r.value) if r.value is not None else None,
            "methods": list(r.methods) if r.methods else None,
            "stabilization_indices": list(r.stabilization_indices)
            if r.stabilization_indices
            else None,
            "error": r.error,
        }

    probes = []
    for probe, rs in report.probe_results[1:]:
        probes.append({"point": probe.label, "values": {str(r.order): list(r.value) if r.ok else None for r in rs}})
    doc = {
        "map": report.map_name,
        "parameters": {"N": report.N, "H": report.H, "tol": report.tol},
        "functionals": list(report.functionals),
        "orders": [res(r) for r in report.results],
        "probes": probes,
        "classification": {
            "verdict": report.classification,
            "witness": None
            if report.witness is None
            else {
                "orders": [str(report.witness[0]), str(report.witness[1])],
                "point": report.witness[2],
            },
            "close_to_regular": report.close_to_regular,
        },
    }
    if consistent is not None:
        doc["criteria_consistent"] = consistent
    return doc
