import pytest

from egs import (
    EgsError,
    Ico,
    TransformError,
    apply_is,
    apply_tau,
    backward_compactify,
    check_uo,
    find_coalescing,
    find_complete_icos,
    find_is,
    is_immediate_coalescing,
    is_immediate_is,
    relation,
    sim_classes,
    validate_structure,
)

from corpus import ico_corpus
from fixtures import (
    g_g76,
    g_icot,
    g_kms,
    g_nec_interpolation,
    g_nec_participant,
    g_nul,
    g_ovlp,
    g_sim,
    g_uom,
    path,
)


def test_icot_complete_icos():
    g = g_icot()
    icos = find_complete_icos(g)
    # exactly: the BC pair, the BC pair plus the AD part, and the root lift
    # of player 2's set
    deep = [i for i in icos if i.is_parts and i.is_parts[0].anchor.length == 2]
    assert len(deep) == 2
    assert {len(i.is_parts) for i in deep} == {2, 3}
    theta = deep[0]
    assert len(theta.is_parts) == 2
    owners = {p.owner for p in theta.is_parts}
    assert owners == {"4", "5"}
    anchors = {p.anchor.label() for p in theta.is_parts}
    assert anchors == {"B/C"}


def test_icot_incomplete_candidates_rejected():
    g = g_icot()
    icos = find_complete_icos(g)
    ad = path({"1": "A"}, {"2": "D"})
    # the AD part alone (or with only one BC part) never appears: player
    # 5's set would not participate, or the overlap would not move whole
    for ico in icos:
        parts = {(p.owner, p.anchor.label()) for p in ico.is_parts}
        if ("4", "A/D") in parts:
            assert ("4", "B/C") in parts and ("5", "B/C") in parts


def test_apply_tau_icot():
    g = g_icot()
    icos = find_complete_icos(g)
    theta = [i for i in icos if len(i.is_parts) == 2 and i.is_parts[0].anchor.length == 2][0]
    new, comp = apply_tau(g, theta)
    assert validate_structure(new).ok
    assert check_uo(new)[0]
    bc = path({"1": "B"}, {"2": "C"})
    assert sorted(new.active(bc)) == ["3", "4", "5"]
    # the BC members lifted one level; the AD members stayed at depth 3
    h4_new = comp.infoset_map[theta.is_parts[0].mover]
    assert sorted(m.length for m in h4_new.members) == [2, 3, 3]
    assert any(m == bc for m in h4_new.members)


def test_tau_pure_coalescing_composition():
    # an ICO with only coalescing parts is just iterated coalescing
    from fixtures import g_ladder
    from egs import apply_coalescing

    g = g_ladder()
    opp = find_coalescing(g)[0]
    assert is_immediate_coalescing(g, opp)
    ico = Ico((opp,), ())
    via_tau, _ = apply_tau(g, ico)
    direct, _ = apply_coalescing(g, opp)
    assert via_tau == direct


def test_uom_mid_composition_uo_break_tolerated():
    g = g_uom()
    icos = find_complete_icos(g)
    assert icos
    theta = [i for i in icos if len(i.is_parts) == 2][0]
    # applying the player-3 part alone violates UO en route
    p3 = [p for p in theta.is_parts if p.owner == "3"][0]
    mid, _ = apply_is(g, p3)
    assert not check_uo(mid)[0]
    # the composed transformation restores it
    new, _ = apply_tau(g, theta)
    assert check_uo(new)[0]
    assert validate_structure(new).ok


def test_find_complete_icos_requires_uo():
    with pytest.raises(EgsError):
        find_complete_icos(g_kms())


def test_apply_tau_rejects_incomplete():
    g = g_uom()
    theta = [i for i in find_complete_icos(g) if len(i.is_parts) == 2][0]
    partial = Ico((), (theta.is_parts[0],))
    with pytest.raises(TransformError):
        apply_tau(g, partial)


def test_nul_sigma_alone_not_complete():
    g = g_nul()
    icos = find_complete_icos(g)
    # the only complete ICO at the depth-1 class moves both players
    assert all(
        len(ico.is_parts) != 1 or ico.is_parts[0].anchor != g.root
        for ico in icos
    )
    both = [
        ico for ico in icos
        if len(ico.is_parts) == 2 and {p.owner for p in ico.is_parts} == {"2", "3"}
    ]
    assert len(both) == 1


def test_ovlp_condition_b_rejected_and_uo_breaks_when_forced():
    g = g_ovlp()
    icos = find_complete_icos(g)
    for ico in icos:
        for part in ico.is_parts:
            assert part.owner not in ("4", "5")
    # force the two lifts by hand
    opp_a = [o for o in find_is(g) if o.owner == "4"]
    opp_bc = [o for o in find_is(g) if o.owner == "5" and o.anchor.length == 2]
    assert len(opp_a) == 1 and len(opp_bc) == 1
    mid, hmap = apply_is(g, opp_a[0])
    mover5 = hmap.infoset_map[opp_bc[0].mover]
    d = tuple(m for m in mover5.members if opp_bc[0].anchor.is_prefix_of(m) and m != opp_bc[0].anchor)
    from egs import IsOpp

    forced, hmap2 = apply_is(mid, IsOpp("5", opp_bc[0].anchor, d, mover5))
    ok, witness = check_uo(forced)
    assert not ok
    h4 = hmap2.infoset_map[hmap.infoset_map[g.info_set_of("4", path({"1": "A"}, {"2": "C"}))]]
    h5 = hmap2.infoset_map[hmap.infoset_map[g.info_set_of("5", path({"1": "A"}, {"2": "C"}))]]
    r = relation(forced, h4, h5)
    assert r.before and r.after


def test_nec_participant_rejection():
    g = g_nec_participant()
    ra = path({"1": "R"}, {"4": "A"})
    atom = [o for o in find_is(g) if o.anchor == ra]
    assert len(atom) == 1 and is_immediate_is(g, atom[0])
    assert find_complete_icos(g) == []


def test_nec_interpolation_rejection():
    g = g_nec_interpolation()
    opps = find_coalescing(g)
    assert len(opps) == 1
    assert not is_immediate_coalescing(g, opps[0])
    for ico in find_complete_icos(g):
        assert ico.coalescings == ()


def test_backward_g76_takes_the_deep_lift():
    g = g_g76()
    result, schedule = backward_compactify(g)
    assert validate_structure(result).ok
    assert len(schedule) == 1
    ico = schedule[0]
    assert len(ico.is_parts) == 1
    assert ico.is_parts[0].anchor == path({"1": "B"})
    assert ico.is_parts[0].owner == "3"
    # player 3 now moves at B simultaneously with player 2's action there
    b = path({"1": "B"})
    assert sorted(result.active(b)) == ["2", "3"]
    # the root lift of player 2 is no longer a complete ICO
    assert find_complete_icos(result) == []


def test_backward_fixpoint_on_ico_free_structure():
    g = g_sim()
    result, schedule = backward_compactify(g)
    assert schedule == []
    assert result == g


def test_backward_icot_schedule_starts_with_deepest_theta():
    g = g_icot()
    first_deep = [
        i for i in find_complete_icos(g)
        if i.is_parts and i.is_parts[0].anchor.length == 2
    ][0]
    result, schedule = backward_compactify(g)
    assert schedule[0] == first_deep
    # folding apply_tau over the schedule reproduces the result
    current = g
    for ico in schedule:
        current, _ = apply_tau(current, ico)
    assert current == result
    assert check_uo(result)[0]


def test_compactification_preserves_orderings_on_corpus():
    for structure, ico in ico_corpus(30, seed=7):
        new, comp = apply_tau(structure, ico)
        assert validate_structure(new).ok
        assert check_uo(new)[0]
        sets = structure.info_sets
        for i, a in enumerate(sets):
            for b in sets[i + 1:]:
                r = relation(structure, a, b)
                ai, bi = comp.infoset_map[a], comp.infoset_map[b]
                if ai == bi:
                    continue
                r2 = relation(new, ai, bi)
                # simultaneity is preserved
                if r.simultaneous:
                    assert r2.simultaneous
                # strict following never reverses
                if r.before and not r.simultaneous:
                    assert not (r2.after and not r2.before)
