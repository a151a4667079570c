"""String encodings of subtree features.

- leaf:       ``C``
- composite:  ``C⌈3#5⌋`` (child ids sorted numerically)
- contexted:  ``7∘12`` or ``7∘∅`` for the empty context
"""
from __future__ import annotations

from collections.abc import Callable, Iterable

from context_kernel.datasets.graph import label_violation


OPEN = "⌈"
CLOSE = "⌋"
SEP = "#"
CONTEXT_SEP = "∘"
EMPTY_CONTEXT = "∅"


class EncodingError(ValueError):
    """A label cannot be encoded (empty or contains a reserved symbol)."""


def _checked(label: str) -> str:
    problem = label_violation(label)
    if problem:
        raise EncodingError(problem)
    return label


def encode_leaf(label: str) -> str:
    return _checked(label)


def encode_composite(label: str, child_ids: Iterable[int]) -> str:
    """``label⌈id#id#...⌋`` with the child ids in ascending numeric order.

    Raises:
        EncodingError: Invalid label.
        ValueError: No children.
    """
    ids = sorted(child_ids)
    if not ids:
        raise ValueError("composite encoding needs at least one child")
    return f"{_checked(label)}{OPEN}{SEP.join(str(i) for i in ids)}{CLOSE}"


def encode_contexted(feature_id: int, context_id: int | None) -> str:
    """Pair a feature with its parent context, or with ∅ when ``context_id`` is None."""
    context = EMPTY_CONTEXT if context_id is None else str(context_id)
    return f"{feature_id}{CONTEXT_SEP}{context}"


def is_contexted(encoding: str) -> bool:
    return CONTEXT_SEP in encoding


# ── id translation ─────────────────────────────────────────────


def _remap_ids(body: str, translate: Callable[[int], int]) -> list[int]:
    return sorted(translate(int(part)) for part in body.split(SEP)) if body else []


def remap_composite(encoding: str, translate: Callable[[int], int]) -> str:
    """Rewrite the child ids of a plain (leaf or composite) encoding.

    Labels never contain ``⌈``, so the first ``⌈`` opens the child list.
    Children are re-sorted after translation.
    """
    head, open_, rest = encoding.partition(OPEN)
    if not open_:
        return encoding
    ids = _remap_ids(rest[: -len(CLOSE)], translate)
    return f"{head}{OPEN}{SEP.join(str(i) for i in ids)}{CLOSE}"


def remap_contexted(encoding: str, translate: Callable[[int], int]) -> str:
    feature, _, context = encoding.partition(CONTEXT_SEP)
    new_context = None if context == EMPTY_CONTEXT else translate(int(context))
    return encode_contexted(translate(int(feature)), new_context)


def remap_wl(encoding: str, translate: Callable[[int], int]) -> str:
    """Like :func:`remap_composite`, but the head is itself an id (WL refinements)."""
    head, open_, rest = encoding.partition(OPEN)
    if not open_:
        return encoding
    ids = _remap_ids(rest[: -len(CLOSE)], translate)
    return f"{translate(int(head))}{OPEN}{SEP.join(str(i) for i in ids)}{CLOSE}"


def remap_encoding(encoding: str, translate: Callable[[int], int]) -> str:
    """Translate the ids embedded in a TCK/ODD encoding string."""
    if is_contexted(encoding):
        return remap_contexted(encoding, translate)
    return remap_composite(encoding, translate)
