"""Symbolic layer: spaces, signatures, adjoint/flip words and their semantics.

A word is read left to right, so ``t****s`` means: flip with ``t``, take the
adjoint four times, then flip with ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

BASES = ("X", "Y", "Z", "W", "S")
STAR = "*"
FLIP_NAMES = ("i", "j", "r", "t", "s")
LETTERS = (STAR,) + FLIP_NAMES
NET_LETTERS = ("α", "β", "γ")


class WordParseError(ValueError):
    def __init__(self, text: str, column: int):
        self.text = text
        self.column = column
        super().__init__(
            f"unexpected character {text[column - 1]!r} at column {column} in word {text!r}"
        )


@dataclass(frozen=True)
class Space:
    base: str
    dual_level: int = 0

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base space {self.base!r}")
        if self.dual_level < 0:
            raise ValueError("dual_level must be non-negative")

    @property
    def dual(self) -> Space:
        return Space(self.base, self.dual_level + 1)

    def same_coordinates(self, other: Space) -> bool:
        """True when the finite model identifies the two spaces (levels collapse mod 2)."""
        return self.base == other.base and (self.dual_level - other.dual_level) % 2 == 0

    def collapsed(self) -> Space:
        return Space(self.base, self.dual_level % 2)

    def __str__(self) -> str:
        return self.base + STAR * self.dual_level


@dataclass(frozen=True)
class Signature:
    args: tuple[Space, ...]
    codomain: Space

    def __post_init__(self):
        if len(self.args) not in (2, 3):
            raise ValueError(f"signature must have 2 or 3 arguments, got {len(self.args)}")
        # memoised signature steps hash these constantly
        key = tuple((a.base, a.dual_level) for a in self.args + (self.codomain,))
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def of(cls, *names: str) -> Signature:
        """``Signature.of("X", "Y", "Z", "W")`` builds ``X x Y x Z -> W``; names may carry stars."""
        spaces = [parse_space(n) for n in names]
        return cls(tuple(spaces[:-1]), spaces[-1])

    @property
    def arity(self) -> int:
        return len(self.args)

    def collapsed(self) -> Signature:
        return Signature(tuple(a.collapsed() for a in self.args), self.codomain.collapsed())

    def is_canonical_trilinear(self) -> bool:
        return self == CANONICAL

    def is_bidual_trilinear(self) -> bool:
        return self == BIDUAL

    def __str__(self) -> str:
        return " x ".join(str(a) for a in self.args) + " -> " + str(self.codomain)


def parse_space(text: str) -> Space:
    base = text.rstrip(STAR)
    return Space(base, len(text) - len(base))


CANONICAL = Signature.of("X", "Y", "Z", "W")
BIDUAL = Signature.of("X**", "Y**", "Z**", "W**")


# -- flips ------------------------------------------------------------------


@dataclass(frozen=True)
class Flip:
    """A relabelling of the three argument slots.

    ``perm`` is the arrangement of the original argument roles in the flipped
    map: ``t`` has ``perm == (2, 0, 1)`` because ``f^t`` takes ``(z, x, y)``.
    """

    name: str
    perm: tuple[int, int, int]

    def __str__(self) -> str:
        return self.name


IDENTITY = Flip("id", (0, 1, 2))
FLIPS = {
    "i": Flip("i", (1, 0, 2)),
    "j": Flip("j", (0, 2, 1)),
    "r": Flip("r", (2, 1, 0)),
    "t": Flip("t", (2, 0, 1)),
    "s": Flip("s", (1, 2, 0)),
}
GROUP = (IDENTITY,) + tuple(FLIPS.values())
_BY_PERM = {f.perm: f for f in GROUP}


def as_flip(flip: Flip | str) -> Flip:
    if isinstance(flip, Flip):
        return flip
    if flip in ("id", ""):
        return IDENTITY
    try:
        return FLIPS[flip]
    except KeyError:
        raise ValueError(f"unknown flip {flip!r}") from None


def flip_from_perm(perm: Sequence[int]) -> Flip:
    return _BY_PERM[tuple(perm)]


def flip_signature(sig: Signature, flip: Flip | str) -> Signature:
    flip = as_flip(flip)
    if sig.arity != 3:
        raise ValueError(f"flip undefined for arity {sig.arity}")
    return Signature(tuple(sig.args[k] for k in flip.perm), sig.codomain)


def _flipped(h, flip: Flip):
    # h^flip takes its arguments in the arrangement flip.perm of h's own slots
    def g(*u):
        v = [None] * 3
        for k, role in enumerate(flip.perm):
            v[role] = u[k]
        return h(*v)

    return g


def flip_compose(a: Flip | str, b: Flip | str) -> Flip:
    """The flip equal to applying ``a`` then ``b``, found on symbolic terms."""
    a, b = as_flip(a), as_flip(b)

    def f(*args):
        return ("f",) + tuple(args)

    composite = _flipped(_flipped(f, a), b)
    probe = ("p", "q", "u")
    target = composite(*probe)
    for c in GROUP:
        if _flipped(f, c)(*probe) == target:
            return c
    raise AssertionError("flips are not closed under composition")  # pragma: no cover


def flip_inverse(a: Flip | str) -> Flip:
    a = as_flip(a)
    return next(c for c in GROUP if flip_compose(a, c) == IDENTITY)


def composition_table() -> dict[tuple[str, str], str]:
    return {(a.name, b.name): flip_compose(a, b).name for a in GROUP for b in GROUP}


# -- signature calculus ------------------------------------------------------


def star_signature(sig: Signature) -> Signature:
    if sig.arity == 3:
        a, b, c = sig.args
        return Signature((sig.codomain.dual, a, b), c.dual)
    a, b = sig.args
    return Signature((sig.codomain.dual, a), b.dual)


def reverse_signature(sig: Signature) -> Signature:
    """Bilinear flip ``m^r(y, x) = m(x, y)``."""
    if sig.arity != 2:
        raise ValueError(f"bilinear flip undefined for arity {sig.arity}")
    return Signature(sig.args[::-1], sig.codomain)


@dataclass(frozen=True)
class Word:
    letters: tuple[str, ...] = ()

    def __post_init__(self):
        for k, letter in enumerate(self.letters, 1):
            if letter not in LETTERS:
                raise WordParseError("".join(self.letters), k)

    @classmethod
    def parse(cls, text: str) -> Word:
        for k, ch in enumerate(text, 1):
            if ch not in LETTERS:
                raise WordParseError(text, k)
        return cls(tuple(text))

    def __add__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(self.letters)


def as_word(w: Word | str) -> Word:
    return w if isinstance(w, Word) else Word.parse(w)


def word_signature(base: Signature, w: Word | str) -> Signature:
    if base.arity != 3:
        raise ValueError("word_signature needs a tri-linear base signature")
    return reduce(_signature_step, as_word(w).letters, base)


def signature_chain(base: Signature, w: Word | str) -> list[Signature]:
    """Signatures after each prefix of ``w``, starting with ``base`` itself."""
    chain = [base]
    for letter in as_word(w).letters:
        chain.append(_signature_step(chain[-1], letter))
    return chain


@lru_cache(maxsize=4096)
def signature_step(sig: Signature, letter: str) -> Signature:
    """Signature after one letter; memoised since words revisit the same signatures."""
    if letter == STAR:
        return star_signature(sig)
    return flip_signature(sig, FLIPS[letter])


_signature_step = signature_step


def bilinear_word_signature(base: Signature, w: Word | str) -> Signature:
    """Fold ``*`` and the bilinear flip ``r`` over a bilinear signature."""
    sig = base
    for letter in as_word(w).letters:
        if letter == STAR:
            sig = star_signature(sig)
        elif letter == "r":
            sig = reverse_signature(sig)
        else:
            raise ValueError(f"letter {letter!r} is not defined for bilinear maps")
    return sig


# -- finite-dimensional semantics -------------------------------------------


@dataclass(frozen=True)
class AxisPermutation:
    """Rearrangement of the four axes (three arguments, one codomain).

    Axis ``k`` of the rearranged tensor is axis ``perm[k]`` of the original,
    i.e. the tuple is what ``numpy.transpose`` expects.
    """

    perm: tuple[int, int, int, int] = (0, 1, 2, 3)
    star_count: int = 0

    def then(self, other: AxisPermutation) -> AxisPermutation:
        return AxisPermutation(
            tuple(self.perm[k] for k in other.perm), self.star_count + other.star_count
        )

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2, 3)


STAR_AXES = AxisPermutation((3, 0, 1, 2), 1)


def letter_axis_permutation(letter: str) -> AxisPermutation:
    if letter == STAR:
        return STAR_AXES
    return AxisPermutation(FLIPS[letter].perm + (3,), 0)


def word_to_axis_permutation(w: Word | str) -> AxisPermutation:
    return reduce(
        AxisPermutation.then,
        (letter_axis_permutation(x) for x in as_word(w).letters),
        AxisPermutation(),
    )


# -- extension orders --------------------------------------------------------


@dataclass(frozen=True)
class ExtensionOrder:
    """Limit order over the net indices (0=α, 1=β, 2=γ), outermost first."""

    order: tuple[int, int, int]

    @classmethod
    def parse(cls, text: str) -> ExtensionOrder:
        table = {"a": 0, "b": 1, "c": 2, "α": 0, "β": 1, "γ": 2}
        try:
            order = tuple(table[ch] for ch in text)
        except KeyError:
            raise ValueError(f"bad order string {text!r}") from None
        if sorted(order) != [0, 1, 2]:
            raise ValueError(f"bad order string {text!r}")
        return cls(order)

    @property
    def outer_first(self) -> tuple[int, int, int]:
        return self.order

    def __str__(self) -> str:
        return "".join(NET_LETTERS[k] for k in self.order)

    @property
    def ascii(self) -> str:
        return "".join("abc"[k] for k in self.order)


# The six natural extensions in their conventional listing order.
CANONICAL_WORDS = ("****", "i****i", "j****j", "r****r", "t****s", "s****t")


def _canonical_flips(w: Word) -> Flip | None:
    text = str(w)
    if text == "****":
        return IDENTITY
    if len(text) != 6 or text[1:5] != "****":
        return None
    first, last = text[0], text[5]
    if first not in FLIPS or last not in FLIPS:
        return None
    if flip_compose(first, last) != IDENTITY:
        return None
    return FLIPS[first]


def is_canonical(w: Word | str) -> bool:
    return _canonical_flips(as_word(w)) is not None


def extension_order(w: Word | str) -> ExtensionOrder:
    """Limit order of the extension ``f^{a****a'}``.

    The extension of ``f^a`` takes its limits over the slots of ``f^a`` from
    first (outermost) to last, and slot ``k`` of ``f^a`` carries the net of
    original role ``a.perm[k]``.
    """
    flip = _canonical_flips(as_word(w))
    if flip is None:
        raise ValueError(f"not a canonical extension word: {str(w)!r}")
    return ExtensionOrder(flip.perm)


CANONICAL_ORDERS = tuple(extension_order(w) for w in CANONICAL_WORDS)
ORDER_WORD = {o: w for w, o in zip(CANONICAL_WORDS, CANONICAL_ORDERS)}


def all_words(max_length: int) -> Iterable[Word]:
    from itertools import product

    for n in range(max_length + 1):
        for letters in product(LETTERS, repeat=n):
            yield Word(letters)
