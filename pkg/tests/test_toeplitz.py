import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epalg.constructions import epk_system, o21_system, z2_strings_system
from epalg.graph import Path
from epalg.toeplitz import (FockBatch, MatrixFamily, Monomial, WordError, check_product,
                            check_relations, family_from_json, family_to_json, fock_check,
                            format_combination, is_monomial, lc_adjoint, monomial_multiply,
                            monomials_up_to, normalize, parse_word, perturb_family,
                            product_census, random_word, scan_dimension_one, strings_m3_family,
                            word_adjoint)


def _nf(system, text):
    return format_combination(system, normalize(system, text))


def test_o21_relations():
    s = o21_system()
    assert _nf(s, "u(1) s(0)") == "s(1)"
    assert _nf(s, "u(1) s(1)") == "s(0) u(1)"
    assert _nf(s, "s*(0) s(1)") == "0"
    assert _nf(s, "s*(0) s(0)") == "p(v)"
    assert _nf(s, "u(1) u(-1)") == "p(v)"


def test_parse_errors():
    s = o21_system()
    with pytest.raises(WordError):
        parse_word(s, "s(7)")
    with pytest.raises(WordError):
        parse_word(s, "x(0)")
    with pytest.raises(WordError):
        parse_word(s, "u(a)")


def test_word_adjoint_matches_lc_adjoint():
    s = epk_system(3, 2)
    rng = random.Random(3)
    for _ in range(50):
        w = random_word(s, rng)
        assert lc_adjoint(s, normalize(s, w)) == normalize(s, word_adjoint(s, w))


def test_monomial_product_branches():
    s = o21_system()
    v = Path((), 0)
    e0, e1 = Path((0,), 0), Path((1,), 0)
    # (e1, 0, v)(e0, 1, v): nu = v is a prefix of e0
    m = monomial_multiply(s, Monomial(e1, 0, v), Monomial(e0, 1, v))
    assert m == Monomial(Path((1, 0), 0), 1, v)
    # (v, 1, e1)(e1, 0, v) = (v, 1, v)
    assert monomial_multiply(s, Monomial(v, 1, e1), Monomial(e1, 0, v)) == Monomial(v, 1, v)
    # incomparable paths give zero
    assert monomial_multiply(s, Monomial(v, 0, e0), Monomial(e1, 0, v)) is None


def test_is_monomial_rejects_bad_source():
    s = z2_strings_system()
    bad = Monomial(Path((), 0), 0, Path((), 1))
    assert not is_monomial(s, bad)
    assert is_monomial(s, Monomial(Path((), 1), 1, Path((), 0)))


@pytest.mark.parametrize("system", [o21_system(), epk_system(3, 2), z2_strings_system()],
                         ids=lambda s: s.name)
def test_batch_and_scalar_agree(system):
    rng = random.Random(11)
    batch = FockBatch(system, 4, 2)
    for _ in range(20):
        w = random_word(system, rng, 5, 2)
        a = fock_check(system, w, 4, 2, engine="scalar")
        b = fock_check(system, w, batch=batch, engine="batch")
        assert a.ok and b.ok


def test_fock_detects_wrong_normal_form():
    s = o21_system()
    batch = FockBatch(s, 4, 2)
    tokens = parse_word(s, "u(1) s(1)")
    wrong = normalize(s, "s(1)")
    assert batch.compare(tokens, wrong)


def test_product_census_and_sample():
    s = epk_system(3, 2)
    monos = monomials_up_to(s, 2, 1)
    census = product_census(s, monos)
    assert census["invalid"] == []
    assert census["zero"] + census["single"] == census["pairs"]
    assert census["zero"] and census["single"]
    batch = FockBatch(s, 5, 3)
    rng = random.Random(5)
    for _ in range(20):
        assert check_product(s, rng.choice(monos), rng.choice(monos), batch) == []


def test_m3_family_ck_and_perturbation():
    s = z2_strings_system()
    fam = strings_m3_family(s)
    assert check_relations(s, fam, "ck")["pass"]
    assert check_relations(s, fam, "toeplitz")["pass"]
    assert not check_relations(s, perturb_family(fam, 1e-3, seed=1), "ck")["pass"]


def test_zero_family_fails_unit_only():
    s = z2_strings_system()
    z = np.zeros((2, 2), dtype=complex)
    fam = MatrixFamily({v: z for v in range(3)}, {e: z for e in range(2)}, {1: z})
    rep = check_relations(s, fam, "toeplitz")
    assert not rep["pass"]
    assert "unit" in rep["failed"]


def test_family_json_round_trip():
    s = z2_strings_system()
    fam = strings_m3_family(s)
    back = family_from_json(s, family_to_json(s, fam))
    assert check_relations(s, back, "ck")["pass"]
    with pytest.raises(WordError):
        family_from_json(s, {"P": {"0": [[1]]}})


def test_dimension_one_unsatisfiable():
    rep = scan_dimension_one(o21_system(), steps=8)
    assert not rep["satisfiable_at_1e-9"]
    assert rep["min_worst_deviation"] >= rep["lower_bound"] == 0.5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_words_o21(seed):
    s = o21_system()
    w = random_word(s, random.Random(seed), 5, 2)
    assert fock_check(s, w, 5, 2, engine="scalar").ok
