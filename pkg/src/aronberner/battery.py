"""Seeded identity battery for the finite model and the acceptance checks run by ``report --all``."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import catalog, limits
from .signatures import (
    CANONICAL,
    CANONICAL_WORDS,
    GROUP,
    IDENTITY,
    LETTERS,
    Signature,
    Word,
    all_words,
    as_flip,
    flip_compose,
    flip_inverse,
    signature_chain,
    word_to_axis_permutation,
)
from .tensor import (
    MAX_DIM,
    adjoint,
    apply_word,
    check_identity_2_4,
    check_identity_2_5,
    check_identity_2_6,
    check_mixed_word_identities,
    evaluate,
    pairing,
    random_bilinear,
    random_trilinear,
    same_tensor,
    TrilinearTensor,
    Vector,
)

IDENTITY_PAIRS = {
    "i****i=s****t": ("i****i", "s****t"),
    "j****j=****": ("j****j", "****"),
    "r****r=t****s": ("r****r", "t****s"),
}
COMPOSED_KEYS = ("composed-i****i", "composed-r****r", "composed-j****j")


def _dyadic(rng, shape, bits):
    # values k / 2**bits with |k| <= 2**bits: products and sums stay exact in doubles
    return rng.integers(-(2**bits), 2**bits + 1, size=shape) / 2.0**bits


def duality_holds(U, rng) -> bool:
    """``<U*(d, a, b), c> == <d, U(a, b, c)>`` exactly, on dyadic data."""
    args = [Vector(_dyadic(rng, n, 3), sp) for n, sp in zip(U.dims, U.sig.args)]
    d = Vector(_dyadic(rng, U.dims[-1], 3), U.sig.codomain.dual)
    S = adjoint(U)
    lhs = pairing(evaluate(S, d, *args[:-1]), args[-1])
    rhs = pairing(d, evaluate(U, *args))
    return lhs == rhs


def _random_word(rng, max_len=6) -> Word:
    n = int(rng.integers(0, max_len + 1))
    return Word(tuple(LETTERS[k] for k in rng.integers(0, len(LETTERS), size=n)))


def check_dims(dims) -> tuple[int, int, int, int]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 4 or not all(1 <= d <= MAX_DIM for d in dims):
        raise ValueError(f"invalid dims {dims}: need four integers in 1..{MAX_DIM}")
    return dims


def tensor_battery(dims, seed: int = 0, trials: int = 100) -> dict[str, list[int]]:
    """Pass counts ``[passed, run]`` per identity on seeded random tensors."""
    dims = check_dims(dims)
    rng = np.random.default_rng(seed)
    a, b, c, d = dims
    counts: dict[str, list[int]] = {
        k: [0, 0]
        for k in ("duality", "word-permutation", "six-words", *IDENTITY_PAIRS, *COMPOSED_KEYS,
                  "mixed-words")
    }

    def tally(key, ok):
        counts[key][0] += bool(ok)
        counts[key][1] += 1

    for _ in range(trials):
        T = random_trilinear(rng, dims)
        Tq = TrilinearTensor(_dyadic(rng, dims, 10))
        U, ok = Tq, True
        for _ in range(4):
            ok &= duality_holds(U, rng)
            U = adjoint(U)
        tally("duality", ok)

        ok = True
        for _ in range(20):
            w = _random_word(rng)
            ok &= np.array_equal(apply_word(T, w).entries, np.transpose(T.entries, word_to_axis_permutation(w).perm))
        tally("word-permutation", ok)

        tally("six-words", all(same_tensor(apply_word(T, w), T) for w in CANONICAL_WORDS))
        for key, (u, v) in IDENTITY_PAIRS.items():
            tally(key, same_tensor(apply_word(T, u), apply_word(T, v)))

        m = random_bilinear(rng, (a, b, d), Signature.of("X", "Y", "S"))
        g = random_bilinear(rng, (d, c, d), Signature.of("S", "Z", "W"))
        for key, check in zip(COMPOSED_KEYS, (check_identity_2_4, check_identity_2_5, check_identity_2_6)):
            tally(key, check(g, m))
        tally("mixed-words", check_mixed_word_identities(T))
    return counts


# -- acceptance ---------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def within_budget(self) -> bool:
        return self.seconds < self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return (
            f"[{mark}] {self.number:2d}. {self.name}: {self.detail}"
            f" ({self.seconds:.2f} s, budget {self.budget:g} s)"
        )


EXPECTED_CHAIN = (
    "W* x X x Y -> Z*",
    "Z** x W* x X -> Y*",
    "Y** x Z** x W* -> X*",
    "X** x Y** x Z** -> W**",
)


def _c1():
    printed = tuple(str(s) for s in signature_chain(CANONICAL, "****")[1:])
    return printed == EXPECTED_CHAIN, " | ".join(printed)


def _c2():
    names = [f.name for f in GROUP]
    table = {(a.name, b.name): flip_compose(a, b).name for a in GROUP for b in GROUP}
    closed = set(table.values()) <= set(names)
    assoc = all(
        flip_compose(flip_compose(a, b), c) == flip_compose(a, flip_compose(b, c))
        for a, b, c in itertools.product(GROUP, repeat=3)
    )
    inverses = all(flip_compose(a, flip_inverse(a)) == IDENTITY for a in GROUP)
    named = {("r", "t"): "j", ("s", "r"): "j", ("r", "s"): "i", ("t", "r"): "i"}
    identities = all(table[k] == v for k, v in named.items())
    ok = closed and assoc and inverses and identities and len(set(names)) == 6
    return ok, f"order {len(set(names))}, closed={closed}, associative={assoc}, inverses={inverses}, r.t=j s.r=j r.s=i t.r=i: {identities}"


def _c3(seed=3):
    rng = np.random.default_rng(seed)
    tensors = [random_trilinear(rng, (2, 3, 2, 2)) for _ in range(10)]
    words = list(all_words(6))
    bad = 0
    for w in words:
        perm = word_to_axis_permutation(w).perm
        for T in tensors:
            if not np.array_equal(apply_word(T, w).entries, np.transpose(T.entries, perm)):
                bad += 1
    return bad == 0, f"{len(words)} words x {len(tensors)} tensors, {bad} mismatches"


def _random_dims(rng, high):
    return tuple(int(x) for x in rng.integers(1, high + 1, size=4))


def _c4(seed=4):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(100):
        T = random_trilinear(rng, _random_dims(rng, 5))
        bad += sum(not np.array_equal(apply_word(T, w).entries, T.entries) for w in CANONICAL_WORDS)
    return bad == 0, f"100 tensors x 6 canonical words, {bad} mismatches"


def _c5(seed=5):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(100):
        T = random_trilinear(rng, _random_dims(rng, 5))
        for u, v in IDENTITY_PAIRS.values():
            bad += not np.array_equal(apply_word(T, u).entries, apply_word(T, v).entries)
    return bad == 0, f"i****i=s****t, j****j=****, r****r=t****s on 100 tensors, {bad} mismatches"


def _c6(seed=6):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(100):
        x, y, z, w, s = (int(v) for v in rng.integers(1, 4, size=5))
        m = random_bilinear(rng, (x, y, s), Signature.of("X", "Y", "S"))
        g = random_bilinear(rng, (s, z, w), Signature.of("S", "Z", "W"))
        bad += sum(not chk(g, m) for chk in (check_identity_2_4, check_identity_2_5, check_identity_2_6))
    return bad == 0, f"three composition identities on 100 (g, m) pairs at 1e-12, {bad} failures"


def _c7(seed=7):
    rng = np.random.default_rng(seed)
    bad = sum(not check_mixed_word_identities(random_trilinear(rng, _random_dims(rng, 5))) for _ in range(100))
    return bad == 0, f"mixed words on 100 tensors, {bad} failures"


def run_example(name: str, N=limits.DEFAULT_N, H=limits.DEFAULT_H, tol=limits.DEFAULT_TOL):
    ex = catalog.get(name)
    return limits.six_extensions(ex.sequence_instance(N), ex.nets(N), N, H, tol)


def _values(report):
    return {r.order.ascii: r.value for r in report.results}


def _c8():
    rep = run_example("triangular-ijk")
    vals = {k: v[0] for k, v in _values(rep).items()}
    expected = {"abc": 1.0, "bac": 0.0, "acb": 0.0, "cba": 0.0, "cab": 0.0, "bca": 0.0}
    exact = all(r.status == limits.STABILIZED for r in rep.results)
    ok = vals == expected and exact and rep.classification == limits.IRREGULAR
    return ok, f"values {vals}, all stabilized={exact}, {rep.classification}"


def _c9():
    rep = run_example("rank-one")
    vals = np.array([r.value for r in rep.results])
    spread = float(np.max(np.ptp(vals, axis=0)))
    ok = rep.classification == limits.REGULAR and spread <= 1e-9
    return ok, f"{rep.classification}, max spread across orders {spread:.2e}"


def _c10():
    rep = run_example("reflexive-middle")
    vals = {k: v[0] for k, v in _values(rep).items()}
    ok = (
        rep.classification == limits.CLOSE_TO_REGULAR
        and vals["cab"] == 0.0 and vals["bca"] == 0.0 and vals["abc"] == 1.0
    )
    return ok, f"{rep.classification}, γαβ={vals['cab']} βγα={vals['bca']} αβγ={vals['abc']}"


def _c11():
    verdicts = {name: limits.theorem21_consistency(run_example(name)) for name in catalog.names()}
    return all(verdicts.values()), ", ".join(f"{k}={v}" for k, v in verdicts.items())


def _c12():
    reg = run_example("composed-regular").classification
    irr = run_example("composed-irregular").classification
    ok = reg == limits.REGULAR and irr == limits.IRREGULAR
    return ok, f"composed-regular: {reg}, composed-irregular: {irr}"


CRITERIA: tuple[tuple[int, str, float, Callable], ...] = (
    (1, "signature chain", 1, _c1),
    (2, "flip group", 1, _c2),
    (3, "word-permutation soundness", 30, _c3),
    (4, "reflexive regularity", 10, _c4),
    (5, "word-pair equalities", 10, _c5),
    (6, "composition battery", 20, _c6),
    (7, "mixed words", 10, _c7),
    (8, "limit separation, triangular-ijk", 5, _c8),
    (9, "rank-one regularity", 5, _c9),
    (10, "reflexive middle space", 5, _c10),
    (11, "regularity criteria consistency", 5, _c11),
    (12, "composed examples", 10, _c12),
)


def run_criterion(number: int) -> Criterion:
    num, name, budget, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    passed, detail = fn()
    return Criterion(num, name, bool(passed), detail, time.perf_counter() - start, budget)


def run_all() -> list[Criterion]:
    return [run_criterion(n) for n, *_ in CRITERIA]
