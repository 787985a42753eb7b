"""The thirteen package-level acceptance checks, one test per criterion.

Each test prints its PASS/FAIL line (visible with -rA or on failure) and
asserts the criterion's verdict, so `pytest -v tests/test_acceptance.py`
reads as the acceptance table.
"""
from sdrkit.acceptance import run_one


def _check(name, actx):
    result = run_one(name, actx)
    mark = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {mark} {result.name}: {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"


def test_symplectic_orders(actx):
    _check("symplectic-orders", actx)


def test_form_census_and_orbits(actx):
    _check("form-census-and-orbits", actx)


def test_arf_coherence(actx):
    _check("arf-coherence", actx)


def test_dihedral_pairs(actx):
    _check("dihedral-pairs", actx)


def test_obstruction_subgroup(actx):
    _check("obstruction-subgroup", actx)


def test_impossibility_m1(actx):
    _check("impossibility-m1", actx)


def test_census_m2(actx):
    _check("census-m2", actx)


def test_orthogonal_index(actx):
    _check("orthogonal-index", actx)


def test_hilbert_symbols(actx):
    _check("hilbert-symbols", actx)


def test_conic_hasse_sweep(actx):
    _check("conic-hasse-sweep", actx)


def test_cubic_densities(actx):
    _check("cubic-densities", actx)


def test_certifier(actx):
    _check("certifier", actx)


def test_quartic_points(actx):
    _check("quartic-points", actx)
