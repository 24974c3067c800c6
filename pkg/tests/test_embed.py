import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bocskit.embed import (EmbedError, EmbeddingBimodule, apply, apply_map, compose_endo, control_constants,
                           find_iso, image_endolength_formula, intertwines, is_exact, kronecker_exemplar,
                           socle_sequence, twist_module, verify_embedding)
from bocskit.exactalg import gf
from bocskit.exactalg.algebra import algebra_from_matrices
from bocskit.exactalg.linalg import is_invertible
from bocskit.fdmod import direct_sum as fd_sum
from bocskit.fdmod import endolength, is_indecomposable, iso_test, residue_dim
from bocskit.skewpid import Atom, SkewRing, direct_sum, indec_module, list_atoms

L3, R3, Z3 = kronecker_exemplar(3)
L2, R2, Z2 = kronecker_exemplar(2)


def restriction(R):
    """Gamma as a rank-1 bimodule over its prime field."""
    F = R.D.prime_field
    A, _ = algebra_from_matrices([np.eye(1, dtype=np.int64)], F)
    return EmbeddingBimodule(A, R, 1, (((R.one(),),),), "restriction").validate()


def corrupted(Z):
    """The Kronecker bimodule with the x-arrow zeroed."""
    R = Z.ring
    acts = list(Z.actions)
    k = Z.algebra.labels.index("a1")
    acts[k] = tuple(tuple(R.poly([0]) for _ in range(2)) for _ in range(2))
    return EmbeddingBimodule(Z.algebra, R, 2, tuple(acts), "corrupted").validate()


def test_kronecker_at_x():
    G = apply(Z3, indec_module(Atom(R3.x), 1))
    assert G.dim_vector() == (1, 1)
    lab = L3.labels
    assert G.actions[lab.index("a0")].tolist() == [[0, 0], [1, 0]]
    assert G.actions[lab.index("a1")].tolist() == [[0, 0], [0, 0]]


def test_kronecker_at_a_linear_point():
    for a in range(3):
        G = apply(Z3, indec_module(Atom(R3.poly([(-a) % 3, 1])), 1))
        assert G.actions[L3.labels.index("a1")][1, 0] == a


@pytest.mark.parametrize("d", [1, 2, 3])
def test_simple_images_are_indecomposable_of_endolength_two(d):
    for p in list_atoms(R3, d):
        if p.deg != d:
            continue
        G = apply(Z3, indec_module(p, 1))
        assert is_indecomposable(G)[0] and endolength(G) == 2


def test_reflects_isomorphism_up_to_degree_four():
    mods = [indec_module(p, 1) for p in list_atoms(R2, 4)]
    imgs = [apply(Z2, N) for N in mods]
    assert len(mods) == 8
    for G, H in itertools.combinations(imgs, 2):
        assert not iso_test(G, H)


def test_restriction_keeps_dimension():
    R = SkewRing(3)
    Z = restriction(R)
    for p in list_atoms(R, 2):
        N = indec_module(p, 2)
        assert apply(Z, N).dim == N.dim


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_dimension_is_rank_times_dim(seed):
    rng = np.random.default_rng(seed)
    atoms = list_atoms(R3, 2)
    for _ in range(3):
        N = indec_module(atoms[int(rng.integers(len(atoms)))], int(rng.integers(1, 4)))
        assert apply(Z3, N).dim == Z3.rank * N.dim


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_additivity_by_explicit_iso(seed):
    rng = np.random.default_rng(seed)
    atoms = list_atoms(R3, 2)
    M, N = (indec_module(atoms[int(rng.integers(len(atoms)))], int(rng.integers(1, 3))) for _ in range(2))
    G, H = apply(Z3, direct_sum(M, N)), fd_sum(apply(Z3, M), apply(Z3, N))
    h = find_iso(G, H)
    assert h is not None
    assert is_invertible(h, L3.field) and intertwines(h, G, H)


def test_socle_sequences_stay_exact():
    for p in list_atoms(R3, 2):
        N = indec_module(p, 3)
        S, Q, inc, proj = socle_sequence(N)
        fi, fp = apply_map(Z3, inc, S, N), apply_map(Z3, proj, N, Q)
        assert intertwines(fi, apply(Z3, S), apply(Z3, N)) and intertwines(fp, apply(Z3, N), apply(Z3, Q))
        assert is_exact(fi, fp, L3.field)
    assert socle_sequence(indec_module(Atom(R3.x), 1)) is None


# -- verification harness --

def test_verify_empty_family():
    rep = verify_embedding(Z3, [])
    assert rep.passed and rep.size == 0 and rep.pairs_checked == 0


def test_verify_kronecker_sweep():
    mods = [indec_module(p, n) for p in list_atoms(R2, 3) for n in (1, 2)]
    rep = verify_embedding(Z2, mods)
    assert rep.passed and rep.sequences_checked == len(mods) // 2
    assert rep.to_json()["passed"]


def test_corrupted_bimodule_fails_reflection_with_iso():
    Zc = corrupted(Z2)
    atoms = [p for p in list_atoms(R2, 2) if p.deg == 1]
    mods = [indec_module(p, 1) for p in atoms]
    rep = verify_embedding(Zc, mods)
    assert not rep.reflects_ok and not rep.passed
    fail = next(f for f in rep.failures if f["check"] == "reflects")
    h = np.array(fail["iso"])
    i, j = fail["pair"]
    G, H = apply(Zc, mods[i]), apply(Zc, mods[j])
    assert is_invertible(h, L2.field) and intertwines(h, G, H)


# -- endolength control --

def test_control_constants_kronecker():
    mods = [indec_module(p, n) for p in list_atoms(R3, 2) for n in (1, 2, 3)]
    ctrl = control_constants(Z3, mods)
    assert (ctrl.c, ctrl.c_prime) == (1, 2) and ctrl.holds()
    assert ctrl.c_prime <= Z3.rank


def test_control_constants_restriction():
    R = SkewRing(2)
    mods = [indec_module(p, 1) for p in list_atoms(R, 3)]
    ctrl = control_constants(restriction(R), mods)
    assert (ctrl.c, ctrl.c_prime) == (1, 1) and ctrl.holds()


def test_endolength_formula_table():
    tab = image_endolength_formula(Z2, Atom(R2.poly([1, 1, 1])), 4)
    assert tab.full_on_sample and tab.holds
    assert [r.endol for r in tab.rows] == [2, 4, 6, 8]
    assert len({r.residue_dim for r in tab.rows}) == 1
    assert [r.dim for r in tab.rows] == [4, 8, 12, 16]
    one = image_endolength_formula(Z2, Atom(R2.x), 1)
    assert len(one.rows) == 1 and one.rows[0].endol_ok


def test_residue_of_image_matches_atom_degree():
    for p in list_atoms(R3, 2):
        G = apply(Z3, indec_module(p, 2))
        assert residue_dim(G) == p.deg


# -- bimodule plumbing --

def test_compose_with_ring_endomorphism():
    f = R3.poly([1, 0, 1])  # x -> x^2 + 1
    Zf = compose_endo(Z3, f)
    assert not Zf.check()
    for p in list_atoms(R3, 2):
        N = indec_module(p, 2)
        assert np.array_equal(apply(Zf, N).actions, apply(Z3, twist_module(N, f)).actions)


def test_bimodule_json_round_trip():
    for Z in (Z2, Z3, kronecker_exemplar(4)[2]):
        W = EmbeddingBimodule.from_json(Z.to_json())
        assert W.to_json() == Z.to_json() and not W.check()


def test_bimodule_errors():
    acts = list(Z3.actions)
    acts[L3.labels.index("e1")] = Z3.actions[L3.labels.index("e2")]
    with pytest.raises(EmbedError):
        EmbeddingBimodule(L3, R3, 2, tuple(acts)).validate()
    with pytest.raises(EmbedError):
        EmbeddingBimodule(L3, R2, 2, Z3.actions)
    with pytest.raises(EmbedError):
        EmbeddingBimodule(L3, R3, 2, Z3.actions[:2])
    with pytest.raises(EmbedError):
        kronecker_exemplar(6)
    with pytest.raises(EmbedError):
        apply(Z3, indec_module(Atom(R2.x), 1))
    with pytest.raises(EmbedError):
        compose_endo(EmbeddingBimodule(L2, SkewRing(2, 2, 1), 2, Z2.actions), R2.x)
