import random

import pytest

from dessinlab import fixtures
from dessinlab.canon import canonical_code
from dessinlab.combmap import degree, pillars, real_scheme, validate
from dessinlab.rules import (
    Anchor,
    NoMatch,
    RejectedMove,
    apply,
    apply_ex,
    load_rule,
    lookup,
    match,
    move_catalog,
)


def pillar_classes(d):
    return sorted((p.kind, p.classification) for p in pillars(d))


def test_catalog_sizes():
    assert len(move_catalog("elementary")) == 6
    assert len(move_catalog("zigzag")) == 8
    assert len(move_catalog("singular")) == 12
    names = [r.name for r in move_catalog("compound")]
    assert "jz-remove" in names and "zz-remove" in names
    assert "mono-stop" in names


def test_unknown_level():
    with pytest.raises(Exception):
        move_catalog("strange")


def test_lookup_aliases():
    assert lookup("bridge").builtin == "bridge-create"
    assert lookup("bridge-destroy").builtin == "bridge-destroy"


FIX = [fixtures.cubic_type_I, fixtures.cubic_type_II,
       fixtures.cubic_type_II_flat, fixtures.hyperbolic_cubic]


def all_moves(d, level="zigzag"):
    out = []
    for r in move_catalog(level):
        for a in match(d, r):
            out.append((r, a))
    return out


@pytest.mark.parametrize("make", FIX)
def test_moves_preserve_validity_and_degree(make):
    d = make()
    deg = degree(d)
    moves = all_moves(d)
    assert moves, "no applicable moves found"
    for r, a in moves:
        try:
            out = apply(d, r, a)
        except RejectedMove:
            continue
        assert validate(out).ok
        assert degree(out) == deg


@pytest.mark.parametrize("make", FIX)
def test_reversible_round_trips(make):
    d = make()
    code = canonical_code(d)
    for r, a in all_moves(d):
        if not r.reversible or r.sequence:
            continue
        try:
            out, new = apply_ex(d, r, a)
        except RejectedMove:
            continue
        inv = lookup(r.inverse_name) if r.inverse_name else r.inverse()
        candidates = match(out, inv)
        assert candidates, f"no inverse match after {r.name}"
        restored = False
        for a2 in candidates:
            try:
                back = apply(out, inv, a2)
            except RejectedMove:
                continue
            if canonical_code(back) == code:
                restored = True
                break
        assert restored, f"{r.name} could not be undone"


def test_black_in_merges_flat_cubic_into_hub_cubic():
    d = fixtures.cubic_type_II_flat()
    r = lookup("black-in")
    anchors = [a for a in match(d, r) if a.variant == "bold"]
    assert anchors
    out = apply(d, r, anchors[0])
    assert canonical_code(out) == canonical_code(fixtures.cubic_type_II())


def test_black_out_recovers_flat_cubic():
    d = fixtures.cubic_type_II()
    r = lookup("black-out")
    anchors = match(d, r)
    outs = {canonical_code(apply(d, r, a)).data for a in anchors}
    assert canonical_code(fixtures.cubic_type_II_flat()).data in outs


def test_white_in_no_adjacent_whites():
    # type-I cubic has no two adjacent real whites: white-in cannot match
    d = fixtures.cubic_type_I()
    assert match(d, lookup("white-in")) == []


def test_zigzag_straighten_counts():
    d = fixtures.cubic_type_II()  # hub-fed zigzags: all three straightenable
    r = lookup("zigzag-straighten")
    anchors = match(d, r)
    outs = []
    for a in anchors:
        try:
            outs.append(apply(d, r, a))
        except RejectedMove:
            # flank-monochrome variants that would force a directed
            # monochrome cycle are guard-rejected
            pass
    # one applicable straightening per zigzag (the flank-absorbing variant)
    assert len(outs) == 3
    for out in outs:
        assert validate(out).ok
        s = real_scheme(out)
        assert s.zigzag_count == 2
        assert degree(out) == 3


def test_zigzag_straighten_requires_interior_feed():
    d = fixtures.cubic_type_I()  # zigzags fed by real black vertices
    assert match(d, lookup("zigzag-straighten")) == []


def test_zigzag_create_inverse():
    d = fixtures.cubic_type_II()
    r = lookup("zigzag-straighten")
    out = None
    for a in match(d, r):
        try:
            out = apply(d, r, a)
            break
        except RejectedMove:
            continue
    assert out is not None
    rc = lookup("zigzag-create")
    back_codes = set()
    for a2 in match(out, rc):
        try:
            back_codes.add(canonical_code(apply(out, rc, a2)).data)
        except RejectedMove:
            pass
    assert canonical_code(d).data in back_codes


def test_bridge_cycle():
    d = fixtures.cubic_type_II()
    rb = lookup("bridge-create")
    anchors = match(d, rb)
    assert anchors
    from dessinlab.combmap import regions

    n_regions = len(regions(d))
    out = None
    for a in anchors:
        try:
            out = apply(d, rb, a)
            break
        except RejectedMove:
            continue
    assert out is not None
    assert validate(out).ok
    assert len(regions(out)) == n_regions + 1
    # destroying the created bridge restores the original
    rd = lookup("bridge-destroy")
    destroys = match(out, rd)
    assert destroys
    codes = set()
    for a2 in destroys:
        try:
            codes.add(canonical_code(apply(out, rd, a2)).data)
        except RejectedMove:
            pass
    assert canonical_code(d).data in codes


def test_bridge_destroy_unique_on_single_bridge():
    d = fixtures.cubic_type_II()
    rb = lookup("bridge-create")
    out = apply(d, rb, match(d, rb)[0])
    assert len(match(out, lookup("bridge-destroy"))) == 1


def mono_playground():
    """Hyperbolic cubic after one white-in: has co-region same-color interior
    edge pairs, which the plain cubics lack."""
    d = fixtures.hyperbolic_cubic()
    r = lookup("white-in")
    return apply(d, r, match(d, r)[0])


def test_mono_stop_resolve():
    d = mono_playground()
    rs = lookup("mono-stop")
    anchors = match(d, rs)
    assert anchors
    out = apply(d, rs, anchors[0])
    assert validate(out).ok
    interior_monos = [v for v in out.verts
                      if v.locus == "interior" and v.color.startswith("mono")]
    assert len(interior_monos) == 1
    rr = lookup("mono-resolve")
    codes = set()
    for a in match(out, rr):
        try:
            codes.add(canonical_code(apply(out, rr, a)).data)
        except RejectedMove:
            pass
    assert canonical_code(d).data in codes


def test_mono_modification_is_stop_plus_other_resolution():
    d = mono_playground()
    rm = lookup("mono-modification")
    anchors = match(d, rm)
    assert anchors
    a = anchors[0]
    direct = apply(d, rm, a)
    stopped = apply(d, lookup("mono-stop"),
                    Anchor("mono-stop", "mono-stop", False, (), a.extra))
    rr = lookup("mono-resolve")
    outs = {canonical_code(apply(stopped, rr, a2)).data
            for a2 in match(stopped, rr)}
    assert canonical_code(direct).data in outs
    assert canonical_code(d).data in outs


def test_stale_anchor_rejected():
    d = fixtures.cubic_type_II()
    r = lookup("zigzag-straighten")
    a = match(d, r)[0]
    out = apply(d, r, a)
    with pytest.raises(NoMatch):
        apply(out, r, a)


def test_random_walk_stays_valid():
    rng = random.Random(11)
    d = fixtures.cubic_type_II()
    deg = degree(d)
    for _ in range(25):
        moves = all_moves(d)
        if not moves:
            break
        r, a = moves[rng.randrange(len(moves))]
        try:
            d2 = apply(d, r, a)
        except RejectedMove:
            continue
        d = d2
        assert validate(d).ok
        assert degree(d) == deg


def test_pillar_preserving_moves():
    d = fixtures.cubic_type_I()
    before = pillar_classes(d)
    for r, a in all_moves(d, "elementary"):
        if not r.pillar_preserving:
            continue
        try:
            out = apply(d, r, a)
        except RejectedMove:
            continue
        assert pillar_classes(out) == before, r.name
