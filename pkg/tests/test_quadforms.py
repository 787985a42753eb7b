import random

import pytest

from sdrkit.f2core import F2Matrix, standard_symplectic
from sdrkit.matgroups import close, symplectic_group, transvection
from sdrkit.quadforms import (
    QuadraticForm,
    act,
    action_shift,
    adapted_symplectic_basis,
    all_forms,
    arf_by_basis,
    arf_by_count,
    arf_from_vector,
    fixed_form_vectors,
    form_from_vector,
    orbits,
    pairing_mask,
    standard_base_form,
)


def _rand_symplectic(space, rng, word=8):
    g = F2Matrix.identity(space.dim)
    for _ in range(word):
        g = g * transvection(rng.randrange(1, 1 << space.dim), space)
    return g


def test_base_form_polarizes_to_pairing():
    """Q0(x+y) + Q0(x) + Q0(y) recovers the symplectic pairing."""
    for m in (1, 2, 3):
        base = standard_base_form(m)
        sp = base.space
        for x in range(1 << sp.dim):
            for y in range(1 << sp.dim):
                polar = base.value(x ^ y) ^ base.value(x) ^ base.value(y)
                assert polar == sp.pairing(x, y)


def test_base_form_arf_is_one():
    for m in (1, 2, 3, 4):
        assert standard_base_form(m).arf == 1


def test_pairing_mask_table():
    sp = standard_symplectic(2)
    for v in range(16):
        mask = pairing_mask(sp, v)
        for x in range(16):
            assert (mask >> x) & 1 == sp.pairing(x, v)


def test_form_tables_are_base_plus_linear():
    base = standard_base_form(2)
    for v in range(16):
        form = form_from_vector(base, v)
        for x in range(16):
            assert form.value(x) == base.value(x) ^ base.space.pairing(x, v)


def test_forms_distinct_and_complete():
    for m in (1, 2):
        base = standard_base_form(m)
        forms = all_forms(base)
        assert len(forms) == 1 << (2 * m)
        assert len({f.table for f in forms}) == len(forms)


def test_arf_from_vector_shortcut():
    base = standard_base_form(3)
    for f in all_forms(base):
        assert arf_from_vector(base, f.v) == f.arf == arf_by_count(f)


def test_arf_by_basis_identity_and_random():
    rng = random.Random(17)
    for m in (1, 2):
        base = standard_base_form(m)
        ident = F2Matrix.identity(2 * m)
        for f in all_forms(base):
            assert arf_by_basis(f, ident) == f.arf
            assert arf_by_basis(f, _rand_symplectic(base.space, rng)) == f.arf


def test_arf_by_basis_rejects_non_symplectic():
    base = standard_base_form(2)
    form = form_from_vector(base, 0)
    squash = F2Matrix([0b1111, 0, 0, 0], 4)
    with pytest.raises(ValueError):
        arf_by_basis(form, squash)


def test_action_shift_defining_identity():
    rng = random.Random(19)
    for m in (1, 2, 3):
        base = standard_base_form(m)
        sp = base.space
        for _ in range(25):
            g = _rand_symplectic(sp, rng)
            w = action_shift(g, base)
            for x in range(1 << sp.dim):
                assert sp.pairing(x, w) == base.value(g.apply(x)) ^ base.value(x)


def test_act_transforms_values():
    rng = random.Random(29)
    base = standard_base_form(2)
    sp = base.space
    for _ in range(50):
        g = _rand_symplectic(sp, rng)
        v = rng.randrange(16)
        form = form_from_vector(base, v)
        moved = act(g, form)
        for x in range(16):
            assert moved.value(g.apply(x)) == form.value(x)
        assert moved.arf == form.arf


def test_act_is_group_action():
    rng = random.Random(37)
    base = standard_base_form(3)
    sp = base.space
    for _ in range(40):
        g = _rand_symplectic(sp, rng)
        h = _rand_symplectic(sp, rng)
        form = form_from_vector(base, rng.randrange(64))
        assert act(g, act(h, form)).v == act(g * h, form).v
    ident = F2Matrix.identity(6)
    assert act(ident, form).v == form.v


def test_act_rejects_non_symplectic():
    base = standard_base_form(2)
    bad = F2Matrix([0b1000, 0b0010, 0b0100, 0b0001], 4)
    with pytest.raises(ValueError):
        act(bad, form_from_vector(base, 0))


def test_fixed_form_vectors_against_brute_force():
    rng = random.Random(41)
    base = standard_base_form(2)
    sp = base.space
    for _ in range(60):
        g = _rand_symplectic(sp, rng)
        brute = {v for v in range(16) if act(g, form_from_vector(base, v)).v == v}
        got = fixed_form_vectors(g, base)
        if got is None:
            assert not brute
            continue
        part, kernel = got
        assert len(brute) == 1 << len(kernel)
        assert part in brute
        for k in kernel:
            assert part ^ k in brute


def test_orbits_match_brute_force_under_small_group():
    base = standard_base_form(1)
    sp = base.space
    t = transvection(0b01, sp)
    group = close([t], sp)
    parts = orbits(group, all_forms(base))
    # brute force: repeatedly apply the only generator
    seen = {}
    for f in all_forms(base):
        orbit = {f.v}
        cur = f
        for _ in range(group.order):
            cur = act(t, cur)
            orbit.add(cur.v)
        seen[f.v] = frozenset(orbit)
    got = {frozenset(x.v for x in p) for p in parts}
    assert got == set(seen.values())


def test_full_group_orbit_sizes_small_m():
    for m, sizes in ((1, [1, 3]), (2, [6, 10])):
        group = symplectic_group(m)
        parts = orbits(group, all_forms(standard_base_form(m)))
        assert sorted(len(p) for p in parts) == sizes


def test_adapted_basis_transports_table_to_standard():
    """For an arf-1 form with the standard polar pairing, the adapted basis
    pulls its value table back onto the reference form's."""
    rng = random.Random(53)
    for m in (1, 2, 3):
        base = standard_base_form(m)
        sp = base.space
        dim = 2 * m
        arf1 = [f for f in all_forms(base) if f.arf == 1]
        for f in rng.sample(arf1, min(5, len(arf1))):
            basis = adapted_symplectic_basis(sp, f.table)
            pulled = 0
            for y in range(1 << dim):
                pulled |= ((f.table >> basis.apply(y)) & 1) << y
            assert pulled == base.table
