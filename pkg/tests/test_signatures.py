import itertools
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aronberner.signatures import (
    BIDUAL,
    CANONICAL,
    CANONICAL_ORDERS,
    CANONICAL_WORDS,
    FLIPS,
    GROUP,
    IDENTITY,
    LETTERS,
    AxisPermutation,
    ExtensionOrder,
    Signature,
    Space,
    Word,
    WordParseError,
    all_words,
    bilinear_word_signature,
    composition_table,
    extension_order,
    flip_compose,
    flip_signature,
    signature_chain,
    star_signature,
    word_signature,
    word_to_axis_permutation,
)
from aronberner.tensor import apply_word, random_trilinear

S = Signature.of

# Each flip's defining line: the arguments the flipped map receives, in terms of (x, y, z).
DEFINING_LINES = {
    "i": lambda x, y, z: (y, x, z),
    "j": lambda x, y, z: (x, z, y),
    "r": lambda x, y, z: (z, y, x),
    "t": lambda x, y, z: (z, x, y),
    "s": lambda x, y, z: (y, z, x),
    "id": lambda x, y, z: (x, y, z),
}


def flipped_by_definition(h, name):
    """h^name per its defining line: h^name(line(x, y, z)) = h(x, y, z)."""
    line = DEFINING_LINES[name]
    table = {}
    for args in itertools.permutations("pqu"):
        table[line(*args)] = h(*args)
    return lambda *u: table[tuple(u)]


def base_map(*args):
    return ("f",) + args


def test_space_equality_and_printing():
    assert Space("X", 2) == Space("X", 2)
    assert Space("X", 2) != Space("X", 1)
    assert Space("X", 1) != Space("Y", 1)
    assert str(Space("W", 3)) == "W***"
    with pytest.raises(ValueError):
        Space("X", -1)
    with pytest.raises(ValueError):
        Space("Q")


def test_signature_predicates():
    assert CANONICAL.is_canonical_trilinear()
    assert BIDUAL.is_bidual_trilinear()
    assert not BIDUAL.is_canonical_trilinear()
    assert str(CANONICAL) == "X x Y x Z -> W"
    with pytest.raises(ValueError):
        Signature((Space("X"),), Space("W"))


@pytest.mark.parametrize(
    "times, expected",
    [
        (1, S("W*", "X", "Y", "Z*")),
        (2, S("Z**", "W*", "X", "Y*")),
        (3, S("Y**", "Z**", "W*", "X*")),
        (4, S("X**", "Y**", "Z**", "W**")),
    ],
)
def test_star_chain_matches_adjoint_items(times, expected):
    sig = CANONICAL
    for _ in range(times):
        sig = star_signature(sig)
    assert sig == expected


def test_star_bilinear():
    m = S("X", "Y", "S")
    assert star_signature(m) == S("S*", "X", "Y*")
    assert bilinear_word_signature(m, "***") == S("X**", "Y**", "S**")
    assert bilinear_word_signature(m, "r***r") == S("X**", "Y**", "S**")
    # g^{r**} takes (S**, W*) as in m^{r***r}(x,y), w* -> z* chase
    g = S("S", "Z", "W")
    assert bilinear_word_signature(g, "r**") == S("S**", "W*", "Z*")


@given(st.lists(st.tuples(st.sampled_from("XYZWS"), st.integers(0, 5)), min_size=4, max_size=4))
def test_four_stars_raise_levels_by_two(spaces):
    sig = Signature(tuple(Space(b, k) for b, k in spaces[:3]), Space(*spaces[3]))
    out = word_signature(sig, "****")
    assert [a.base for a in out.args] == [a.base for a in sig.args]
    assert [a.dual_level for a in out.args] == [a.dual_level + 2 for a in sig.args]
    assert out.codomain == Space(sig.codomain.base, sig.codomain.dual_level + 2)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("i", S("Y", "X", "Z", "W")),
        ("j", S("X", "Z", "Y", "W")),
        ("r", S("Z", "Y", "X", "W")),
        ("t", S("Z", "X", "Y", "W")),
        ("s", S("Y", "Z", "X", "W")),
    ],
)
def test_flip_signatures(name, expected):
    assert flip_signature(CANONICAL, name) == expected


def test_flip_involution_and_arity_error():
    assert flip_signature(flip_signature(CANONICAL, "i"), "i") == CANONICAL
    with pytest.raises(ValueError, match="flip undefined for arity 2"):
        flip_signature(S("X", "Y", "S"), "i")


@pytest.mark.parametrize("name", list(FLIPS))
def test_flip_perm_reproduces_defining_line(name):
    # the stored arrangement and the defining line must describe the same map
    args = ("x", "y", "z")
    arranged = tuple(args[k] for k in FLIPS[name].perm)
    assert arranged == DEFINING_LINES[name](*args)


def test_composition_table_against_term_oracle():
    names = [g.name for g in GROUP]
    table = composition_table()
    for a, b in itertools.product(names, repeat=2):
        h = flipped_by_definition(flipped_by_definition(base_map, a), b)
        matches = [
            c for c in names
            if all(h(*u) == flipped_by_definition(base_map, c)(*u) for u in itertools.permutations("pqu"))
        ]
        assert matches == [table[a, b]], (a, b)


def test_composition_named_identities():
    assert flip_compose("r", "t") == FLIPS["j"]
    assert flip_compose("s", "r") == FLIPS["j"]
    assert flip_compose("r", "s") == FLIPS["i"]
    assert flip_compose("t", "r") == FLIPS["i"]
    assert flip_compose("i", "i") == IDENTITY
    assert flip_compose("t", "s") == IDENTITY


def test_flip_group_is_s3():
    assert len(set(GROUP)) == 6
    for a, b, c in itertools.product(GROUP, repeat=3):
        assert flip_compose(flip_compose(a, b), c) == flip_compose(a, flip_compose(b, c))
    for a in GROUP:
        assert flip_compose(a, IDENTITY) == a == flip_compose(IDENTITY, a)
        assert any(flip_compose(a, b) == IDENTITY for b in GROUP)
    # non-abelian
    assert flip_compose("i", "j") != flip_compose("j", "i")


@pytest.mark.parametrize(
    "word, expected",
    [
        ("***", S("Y**", "Z**", "W*", "X*")),
        ("s****t", S("X**", "Y**", "Z**", "W**")),
        ("", CANONICAL),
        ("t****s", BIDUAL),
    ],
)
def test_word_signature(word, expected):
    assert word_signature(CANONICAL, word) == expected


def test_word_signature_rejects_bilinear():
    with pytest.raises(ValueError):
        word_signature(S("X", "Y", "S"), "*")


def test_signature_chain_has_prefixes():
    chain = signature_chain(CANONICAL, "s****t")
    assert len(chain) == 7
    assert chain[5] == S("Y**", "Z**", "X**", "W**")  # f^{s****}(y**, z**, x**)


@pytest.mark.parametrize(
    "word, args",
    [
        ("****s**t", ("Y", "X", "W*")),
        ("s**t****", ("Y", "X", "W*")),
        ("t**s****", ("W*", "Z", "Y")),
        ("****t**s", ("W*", "Z", "Y")),
    ],
)
def test_mixed_word_argument_lists(word, args):
    # matches (Y**, X**, W*) / (W*, Z**, Y**) once even levels collapse
    sig = word_signature(CANONICAL, word).collapsed()
    assert tuple(str(a) for a in sig.args) == args


def test_word_parse_errors():
    assert str(Word.parse("t****s")) == "t****s"
    with pytest.raises(WordParseError) as exc:
        Word.parse("q")
    assert exc.value.column == 1
    with pytest.raises(WordParseError) as exc:
        Word.parse("**x*")
    assert exc.value.column == 3
    with pytest.raises(WordParseError):
        Word.parse("★")


def test_axis_permutation_examples():
    assert word_to_axis_permutation("****").is_identity
    assert word_to_axis_permutation("i****i").is_identity
    assert word_to_axis_permutation("*").perm == (3, 0, 1, 2)
    assert word_to_axis_permutation("****").star_count == 4
    assert word_to_axis_permutation("").perm == (0, 1, 2, 3)


@given(st.lists(st.sampled_from(LETTERS), max_size=5), st.lists(st.sampled_from(LETTERS), max_size=5),
       st.lists(st.sampled_from(LETTERS), max_size=5))
def test_axis_permutation_composition_is_associative(a, b, c):
    pa, pb, pc = (word_to_axis_permutation(Word(tuple(x))) for x in (a, b, c))
    assert pa.then(pb).then(pc) == pa.then(pb.then(pc))
    assert word_to_axis_permutation(Word(tuple(a + b))) == pa.then(pb)
    assert AxisPermutation().then(pa) == pa


def test_canonical_words_are_identity_permutations():
    for w in CANONICAL_WORDS:
        assert word_to_axis_permutation(w).is_identity


# Limit orders of the six natural extensions as displayed (outermost limit first).
DISPLAYED_ORDERS = {
    "****": "αβγ",
    "i****i": "βαγ",
    "j****j": "αγβ",
    "r****r": "γβα",
    "t****s": "γαβ",
    "s****t": "βγα",
}


@pytest.mark.parametrize("word, order", DISPLAYED_ORDERS.items())
def test_extension_order_matches_display(word, order):
    assert str(extension_order(word)) == order


def test_extension_order_is_bijection():
    assert len(set(CANONICAL_ORDERS)) == 6
    assert {str(o) for o in CANONICAL_ORDERS} == {"".join(p) for p in itertools.permutations("αβγ")}


@pytest.mark.parametrize("word", ["", "***", "t****t", "i***i", "ii", "****s", "x"])
def test_extension_order_rejects_noncanonical(word):
    with pytest.raises(ValueError):
        extension_order(word)


def test_order_parse_roundtrip():
    for o in CANONICAL_ORDERS:
        assert ExtensionOrder.parse(str(o)) == o
        assert ExtensionOrder.parse(o.ascii) == o
    with pytest.raises(ValueError):
        ExtensionOrder.parse("aab")


def test_equal_signature_words_agree_iff_permutations_agree():
    rng = np.random.default_rng(11)
    T = random_trilinear(rng, (2, 3, 2, 2))
    groups = defaultdict(lambda: defaultdict(set))
    for w in all_words(6):
        perm = word_to_axis_permutation(w).perm
        U = apply_word(T, w)
        groups[U.sig][perm].add((U.entries.shape, np.ascontiguousarray(U.entries).tobytes()))
    for by_perm in groups.values():
        # equal permutations give one tensor; distinct ones give distinct tensors
        assert all(len(ts) == 1 for ts in by_perm.values())
        tensors = [next(iter(ts)) for ts in by_perm.values()]
        assert len(set(tensors)) == len(tensors)
