"""Acceptance suite: one test per criterion, each with its runtime budget.

Expected values come from oracles written here, independent of the code
under test: division with remainder, gcd, explicit coboundary formulas,
binary addition for the odometer, and direct conjugacy search.
"""
import itertools
import math
import random
import time

import numpy as np
import pytest

from epalg.algebra import axiom_suite, cohomology_iso_failures, ep_isometry_check, katsura_check, y_basis
from epalg.cocycle import GeneratingCocycle, IntegerAction, extend_to_paths, extend_to_words, group_sample
from epalg.cohomology import (CohomologyWitness, apply_witness, brute_force_cohomologous,
                              canonical_form_Za, coset_space, signature,
                              translation_action, verify_cohomologous, zimmer_cocycle, zimmer_hom,
                              zimmer_witness)
from epalg.constructions import epk_cocycle, epk_decompose, epk_system, o21_system, z2_strings_system
from epalg.graph import Path, classify_vertices
from epalg.group import Cyclic, Integers, Permutation, homomorphisms, subgroups
from epalg.toeplitz import (FockBatch, check_product, check_relations, fock_check,
                            monomials_up_to, perturb_family, product_census, random_word,
                            scan_dimension_one, strings_m3_family)

Z = Integers()


def _systems():
    return [epk_system(2, 1), epk_system(3, 2), z2_strings_system()]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


# -- 1 ----------------------------------------------------------------------------------

@pytest.mark.criterion(1, "EPK signature law, 1 <= a <= 12, |b| <= 24")
def test_c01_epk_signature_law():
    with Budget(1.0):
        for a in range(1, 13):
            for b in range(-24, 25):
                phi = epk_cocycle(a, b)
                for k in range(a):
                    q, r = phi.xi[k], phi.action.tau[k]
                    assert q * a + r == b + k and 0 <= r < a
                assert signature(phi) == b


# -- 2 ----------------------------------------------------------------------------------

def _orbits(perm):
    seen, out = set(), []
    for x in range(len(perm)):
        if x not in seen:
            cyc, y = [], x
            while y not in seen:
                seen.add(y)
                cyc.append(y)
                y = perm[y]
            out.append(cyc)
    return out


@pytest.mark.criterion(2, "EPK decomposition into gcd(a, b) certified orbits")
def test_c02_epk_decomposition():
    with Budget(5.0):
        for a in range(1, 13):
            for b in range(a):
                d = math.gcd(a, b)
                ap, bp = a // d, b // d
                comps = epk_decompose(a, b)
                assert len(comps) == d
                assert len(_orbits([(b + k) % a for k in range(a)])) == d
                for i, comp in enumerate(comps):
                    assert comp.verified
                    assert comp.target == (ap, bp)
                    assert list(comp.theta) == [i + k * d for k in range(ap)]
                    psi = comp.witness.values
                    # EPK(a', b') generating function against the transported one
                    for k in range(ap):
                        k1 = (bp + k) % ap
                        lhs = (bp + k) // ap
                        rhs = psi[k1] + (b + comp.theta[k]) // a - psi[k]
                        assert lhs == rhs
                        assert (b + comp.theta[k]) % a == comp.theta[k1]


# -- 3 ----------------------------------------------------------------------------------

@pytest.mark.criterion(3, "signature is a cohomology invariant (200 random pairs)")
def test_c03_signature_invariance():
    rng = random.Random(3)
    with Budget(5.0):
        for _ in range(200):
            n = rng.randint(1, 6)
            tau = list(range(n))
            rng.shuffle(tau)
            action = IntegerAction(tau)
            xi = [rng.randint(-6, 6) for _ in range(n)]
            phi = GeneratingCocycle(action, Z, xi)
            psi = CohomologyWitness(Z, tuple(rng.randint(-6, 6) for _ in range(n)))
            phi2 = apply_witness(phi, psi)
            assert list(phi2.xi) == [psi(tau[x]) + xi[x] - psi(x) for x in range(n)]
            assert signature(phi2) == signature(phi) == sum(xi)
            assert verify_cohomologous(phi, phi2, psi)


# -- 4 ----------------------------------------------------------------------------------

def _box_witness_exists(xi, xi2, bound=4):
    """Witnesses for Z on Z_a: psi(k) = psi(0) + D(k), D the partial sums of
    xi2 - xi; one exists iff D closes up, and one fits in the box iff the
    spread of D is at most 2 * bound."""
    D = [0]
    for u, v in zip(xi, xi2):
        D.append(D[-1] + v - u)
    if D[-1] != 0:
        return False
    return max(D) - min(D) <= 2 * bound


@pytest.mark.criterion(4, "canonical forms over Z_a and agreement with brute force")
def test_c04_canonical_forms():
    rng = random.Random(4)
    values = range(-3, 4)
    with Budget(60.0):
        for a in range(1, 7):
            A = translation_action(a)
            cocycles = [GeneratingCocycle(A, Z, xi) for xi in itertools.product(values, repeat=a)]
            for phi in cocycles:
                c, psi = canonical_form_Za(phi)
                assert c == sum(phi.xi)
                target = [0] * (a - 1) + [c]
                assert [psi((k + 1) % a) + phi.xi[k] - psi(k) for k in range(a)] == target
            if a <= 3:
                pairs = itertools.product(cocycles, repeat=2)
            else:
                by_sig: dict = {}
                for phi in cocycles:
                    by_sig.setdefault(sum(phi.xi), []).append(phi)
                pairs = []
                for _ in range(1500):
                    p = rng.choice(cocycles)
                    q = rng.choice(by_sig[sum(p.xi)]) if rng.random() < 0.7 else rng.choice(cocycles)
                    pairs.append((p, q))
            for p, q in pairs:
                w = brute_force_cohomologous(p, q, 4)
                assert (w is not None) == _box_witness_exists(p.xi, q.xi)
                if w is not None:
                    assert sum(p.xi) == sum(q.xi)
                    assert all(-4 <= v <= 4 for v in w.values)
                    assert [w((k + 1) % a) + p.xi[k] - w(k) for k in range(a)] == list(q.xi)


# -- 5 ----------------------------------------------------------------------------------

def _conjugate(T, pi, pi2):
    return any(all(pi2[h] == T.op(T.op(t, pi[h]), T.inv(t)) for h in pi) for t in T.elements())


@pytest.mark.criterion(5, "Zimmer round trip for Z_6 and S_3")
def test_c05_zimmer_round_trip():
    targets = [Cyclic(2), Cyclic(3), Permutation(3)]
    with Budget(60.0):
        for G in (Cyclic(6), Permutation(3)):
            for H in subgroups(G):
                space = coset_space(G, H)
                for T in targets:
                    homs = homomorphisms(G, H, T)
                    assert homs
                    cocycles = []
                    for pi in homs:
                        phi = zimmer_cocycle(space, pi, T)
                        assert zimmer_hom(phi, space) == pi
                        cocycles.append(phi)
                    for (pi, phi), (pi2, phi2) in itertools.product(zip(homs, cocycles), repeat=2):
                        conj = _conjugate(T, pi, pi2)
                        w = brute_force_cohomologous(phi, phi2)
                        assert conj == (w is not None), (G, sorted(H), T, pi, pi2)
                        if conj:
                            t = next(t for t in T.elements()
                                     if all(pi2[h] == T.conj(t, pi[h]) for h in pi))
                            assert verify_cohomologous(phi, phi2, zimmer_witness(phi, phi2, space, t))


# -- 6 ----------------------------------------------------------------------------------

@pytest.mark.criterion(6, "*-algebra, bimodule and inner-product identities (500 triples)")
def test_c06_algebra_axioms():
    with Budget(30.0):
        for k, system in enumerate(_systems()):
            report = axiom_suite(system, trials=500, seed=600 + k, radius=4, max_terms=5)
            assert report["pass"], report["failures"]


# -- 7 ----------------------------------------------------------------------------------

@pytest.mark.criterion(7, "finite-rank decomposition of the left action at regular vertices")
def test_c07_katsura_finite_rank():
    with Budget(10.0):
        for system in _systems():
            regular, _ = classify_vertices(system.graph)
            basis = y_basis(system, 3)
            for v in sorted(regular):
                for g in group_sample(system.group, 3):
                    assert katsura_check(system, v, g, basis) == []


# -- 8 ----------------------------------------------------------------------------------

@pytest.mark.criterion(8, "isometry of the model map on generator pairs")
def test_c08_isometry():
    with Budget(5.0):
        for system in _systems():
            assert ep_isometry_check(system, radius=4) == []


# -- 9 ----------------------------------------------------------------------------------

@pytest.mark.criterion(9, "cohomologous cocycles give isomorphic correspondences (50 witnesses)")
def test_c09_cohomology_iso():
    rng = random.Random(9)
    systems = [epk_system(2, 1), epk_system(3, 2), epk_system(4, 2), epk_system(3, -1)]
    with Budget(10.0):
        for _ in range(50):
            system = rng.choice(systems)
            psi = CohomologyWitness(Z, tuple(rng.randint(-4, 4)
                                             for _ in range(system.graph.num_edges)))
            assert cohomology_iso_failures(system, psi, radius=4) == []


# -- 10 ---------------------------------------------------------------------------------

@pytest.mark.criterion(10, "normal forms agree with the Fock oracle; products are single or zero")
def test_c10_rewriting_vs_fock():
    with Budget(120.0):
        for seed, system in ((1001, o21_system()), (1002, epk_system(3, 2))):
            rng = random.Random(seed)
            batch = FockBatch(system, length=8, radius=4)
            for _ in range(500):
                word = random_word(system, rng, max_length=6, radius=4)
                assert fock_check(system, word, 8, 4, batch=batch).ok, word
            monos = monomials_up_to(system, 3, radius=1)
            census = product_census(system, monos)
            assert census["invalid"] == []
            assert census["zero"] + census["single"] == len(monos) ** 2
            for _ in range(100):
                m1, m2 = rng.choice(monos), rng.choice(monos)
                assert check_product(system, m1, m2, batch) == []


# -- 11 ---------------------------------------------------------------------------------

@pytest.mark.criterion(11, "matrix relation checker: M_3 family, perturbation, dimension one")
def test_c11_matrix_relations():
    with Budget(10.0):
        system = z2_strings_system()
        fam = strings_m3_family(system)
        assert np.allclose(sum(fam.S[e] @ fam.S[e].conj().T for e in fam.S), fam.P[0] + fam.P[1])
        report = check_relations(system, fam, mode="ck", tol=1e-9)
        assert report["pass"], report
        noisy = check_relations(system, perturb_family(fam, 1e-3, seed=11), mode="ck", tol=1e-9)
        assert not noisy["pass"] and noisy["failed"]
        scan = scan_dimension_one(o21_system(), mode="ck", steps=12)
        assert not scan["satisfiable_at_1e-9"]
        assert scan["min_worst_deviation"] >= scan["lower_bound"] == 0.5


# -- 12 ---------------------------------------------------------------------------------

def _odometer(n, word):
    """Z acting on binary words, first letter least significant: add n and
    report the carry out of the word."""
    L = len(word)
    value = sum(x << i for i, x in enumerate(word)) + n
    digits = tuple((value % (1 << L)) >> i & 1 for i in range(L))
    return digits, value >> L


@pytest.mark.criterion(12, "self-similar extension on words of length <= 5 (odometer)")
def test_c12_self_similar_extension():
    length = 5
    with Budget(5.0):
        system = epk_system(2, 1)
        action, cocycle = system.action.edge_action, system.cocycle
        wa, wc = extend_to_words(action, cocycle, length)
        words = list(wa.labels)
        assert len(words) == 2 ** (length + 1) - 1
        index = {w: i for i, w in enumerate(words)}
        ball = range(-9, 10)
        for i, w in enumerate(words):
            for g in ball:
                image, carry = _odometer(g, w)
                assert words[wa.act(g, i)] == image and wc.value(g, i) == carry
                for cut in range(len(w) + 1):
                    v, u = w[:cut], w[cut:]
                    gv, k = wa.act(g, index[v]), wc.value(g, index[v])
                    assert words[wa.act(g, i)] == words[gv] + words[wa.act(k, index[u])]
                    assert wc.value(g, i) == wc.value(k, index[u])
                for h in ball:
                    assert wc.value(g + h, i) == wc.value(g, wa.act(h, i)) + wc.value(h, i)
        ones = index[(1,) * length]
        assert words[wa.act(1, ones)] == (0,) * length and wc.value(1, ones) == 1
        pa, pc = extend_to_paths(system, length)
        for j, p in enumerate(pa.labels):
            if not p.edges:
                continue
            i = index[p.edges]
            for g in ball:
                assert pa.labels[pa.act(g, j)].edges == words[wa.act(g, i)]
                assert pc.value(g, j) == wc.value(g, i)
        assert Path((), 0) in pa.labels
