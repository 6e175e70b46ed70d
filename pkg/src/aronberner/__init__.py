"""Adjoint and flip calculus for bilinear and tri-linear maps, and their six Aron-Berner extensions."""

from .signatures import (
    BIDUAL,
    CANONICAL,
    CANONICAL_ORDERS,
    CANONICAL_WORDS,
    FLIPS,
    IDENTITY,
    AxisPermutation,
    ExtensionOrder,
    Flip,
    Signature,
    Space,
    Word,
    WordParseError,
    extension_order,
    flip_compose,
    flip_signature,
    star_signature,
    word_signature,
    word_to_axis_permutation,
)
from .tensor import (
    BilinearTensor,
    TrilinearTensor,
    Vector,
    adjoint,
    apply_word,
    check_identity_2_4,
    check_identity_2_5,
    check_identity_2_6,
    check_mixed_word_identities,
    compose_bilinear,
    evaluate,
    flip,
)
from .limits import (
    ExtensionReport,
    LimitResult,
    NetFamily,
    SequenceModelMap,
    close_to_regular_of_flip,
    iterated_limit,
    six_extensions,
    theorem21_consistency,
)

__version__ = "0.1.0"
