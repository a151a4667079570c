from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import pytest

from context_kernel.features.encoding import (
    EncodingError,
    encode_composite,
    encode_contexted,
    encode_leaf,
    is_contexted,
    remap_encoding,
    remap_wl,
)
from context_kernel.features.interner import FeatureInterner


def test_leaf_is_label():
    assert encode_leaf("C") == "C"


@pytest.mark.parametrize("label", ["a#b", "x⌈", "⌋", "p∘q", ""])
def test_invalid_labels_rejected(label):
    with pytest.raises(EncodingError):
        encode_leaf(label)


def test_composite_sorts_children_numerically():
    assert encode_composite("C", [12, 3, 5]) == "C⌈3#5#12⌋"
    assert encode_composite("C", [5, 3]) == encode_composite("C", [3, 5])


def test_composite_keeps_repeated_children():
    assert encode_composite("A", [4, 4]) == "A⌈4#4⌋"


def test_composite_needs_children():
    with pytest.raises(ValueError):
        encode_composite("C", [])


def test_contexted():
    assert encode_contexted(7, 12) == "7∘12"
    assert encode_contexted(7, None) == "7∘∅"
    assert is_contexted("7∘∅")
    assert not is_contexted("C⌈1⌋")


def test_remap_translates_and_resorts():
    table = {1: 9, 3: 2}
    assert remap_encoding("C⌈1#3⌋", table.__getitem__) == "C⌈2#9⌋"
    assert remap_encoding("C", table.__getitem__) == "C"
    assert remap_encoding("1∘3", table.__getitem__) == "9∘2"
    assert remap_encoding("3∘∅", table.__getitem__) == "2∘∅"
    assert remap_wl("3⌈1#1⌋", table.__getitem__) == "2⌈9#9⌋"
    assert remap_wl("1⌈⌋", table.__getitem__) == "9⌈⌋"


# ── interner ───────────────────────────────────────────────────


def test_interner_assigns_dense_ids_in_order():
    interner = FeatureInterner()
    assert interner.intern("A") == 0
    assert interner.intern("B") == 1
    assert interner.intern("A") == 0
    assert len(interner) == 2
    assert interner.lookup(1) == "B"
    assert interner.get("C") is None
    assert "A" in interner
    assert interner.strings() == ["A", "B"]


def test_interner_tokens_differ():
    assert FeatureInterner().token != FeatureInterner().token


def test_interner_is_thread_safe():
    interner = FeatureInterner()
    words = [f"w{i % 50}" for i in range(5000)]
    with ThreadPoolExecutor(max_workers=8) as pool:
        ids = list(pool.map(interner.intern, words))
    assert len(interner) == 50
    for word, fid in zip(words, ids):
        assert interner.lookup(fid) == word


def test_absorb_rewrites_embedded_ids():
    local = FeatureInterner()
    a = local.intern("A")
    b = local.intern("B")
    local.intern(encode_composite("A", [b]))
    local.intern(encode_contexted(b, local.get("A⌈1⌋")))
    local.intern(encode_contexted(a, None))

    shared = FeatureInterner()
    shared.intern("B")
    remap = shared.absorb(local.strings(), remap_encoding)
    assert remap == [1, 0, 2, 3, 4]
    assert shared.strings() == ["B", "A", "A⌈0⌋", "0∘2", "1∘∅"]
