import random

import pytest

from scrapbook.zorder import (DuplicatePhotoError, UnknownPhotoError, ZOrderArray)


def test_insert_assigns_by_count():
    order = ZOrderArray(z_base=10)
    for pid in "ABC":
        order.insert(pid)
    assert order.z_values() == {"A": 10, "B": 11, "C": 12}


def test_insert_into_empty():
    order = ZOrderArray(z_base=0)
    order.insert("A")
    assert order.z_of("A") == 0


def test_duplicate_insert_rejected():
    order = ZOrderArray(ids=["A"])
    with pytest.raises(DuplicatePhotoError):
        order.insert("A")


def test_send_to_back():
    order = ZOrderArray(ids=["A", "B", "C"])
    order.send_to_back("C")
    assert order.draw_order() == ["C", "A", "B"]


def test_send_to_back_noop_on_backmost():
    order = ZOrderArray(ids=["A", "B", "C"])
    order.send_to_back("A")
    assert order.draw_order() == ["A", "B", "C"]


def test_bring_to_front():
    order = ZOrderArray(ids=["A", "B", "C"])
    order.bring_to_front("A")
    assert order.draw_order() == ["B", "C", "A"]


def test_bring_to_front_noop_on_topmost():
    order = ZOrderArray(ids=["A", "B", "C"])
    order.bring_to_front("C")
    assert order.draw_order() == ["A", "B", "C"]


def test_unknown_id_rejected():
    order = ZOrderArray(ids=["A"])
    with pytest.raises(UnknownPhotoError):
        order.send_to_back("Z")
    with pytest.raises(UnknownPhotoError):
        order.bring_to_front("Z")
    with pytest.raises(UnknownPhotoError):
        order.z_of("Z")


def test_draw_order_is_a_copy():
    order = ZOrderArray(ids=["A", "B"])
    listing = order.draw_order()
    listing.append("X")
    assert order.draw_order() == ["A", "B"]
    assert ZOrderArray().draw_order() == []


def naive_reorder(ids, op, target):
    out = [i for i in ids if i != target]
    if op == "back":
        return [target] + out
    return out + [target]


def test_random_sequences_match_naive_oracle():
    rng = random.Random(20240817)
    for _ in range(1000):
        n = rng.randint(1, 8)
        names = [f"p{k}" for k in range(n)]
        z_base = rng.randint(-5, 20)
        order = ZOrderArray(z_base=z_base)
        mirror = []
        for name in names:
            order.insert(name)
            mirror.append(name)
        for _ in range(rng.randint(0, 12)):
            target = rng.choice(names)
            if rng.random() < 0.5:
                order.send_to_back(target)
                mirror = naive_reorder(mirror, "back", target)
            else:
                order.bring_to_front(target)
                mirror = naive_reorder(mirror, "front", target)
            assert order.draw_order() == mirror
            # z-set stays contiguous and bijective onto photos
            zs = sorted(order.z_values().values())
            assert zs == list(range(z_base, z_base + n))


def test_shifts_stable_for_non_targets():
    order = ZOrderArray(ids=list("ABCDEF"))
    order.send_to_back("D")
    others = [i for i in order.draw_order() if i != "D"]
    assert others == ["A", "B", "C", "E", "F"]
    order.bring_to_front("B")
    others = [i for i in order.draw_order() if i != "B"]
    assert others == ["D", "A", "C", "E", "F"]
