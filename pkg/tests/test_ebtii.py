import pytest

from bocskit.ebtii import (EbtiiError, WitnessFamily, certify, ebtii_ladder, pid_witnesses, push_witnesses)
from bocskit.embed import kronecker_exemplar
from bocskit.skewpid import SkewRing, indec_module, list_atoms, similar

from oracles import count_monic_irreducibles

F2X = SkewRing(2)
_, _, Z2 = kronecker_exemplar(2)
_, _, Z3 = kronecker_exemplar(3)


def test_simples_over_f2():
    fam = pid_witnesses(F2X, 1, 6)
    assert len(fam) == 6 and fam.endolength == 1 and fam.certificate["ok"]
    assert fam.info["max_atom_degree"] == 4  # only 5 atoms of degree <= 3
    atoms = [M.atom for M in fam.members]
    assert not any(similar(p, q) for i, p in enumerate(atoms) for q in atoms[i + 1:])


def test_level_three_keeps_atoms():
    one, three = pid_witnesses(F2X, 1, 6), pid_witnesses(F2X, 3, 6)
    assert three.endolength == 3 and three.certificate["endolengths"] == [3] * 6
    assert three.info["atoms"] == one.info["atoms"]


def test_empty_family():
    fam = pid_witnesses(F2X, 2, 0)
    assert len(fam) == 0 and fam.certificate["ok"]
    out = push_witnesses(Z2, fam)
    assert len(out) == 0 and out.over == "Lambda"


def test_not_enough_atoms():
    with pytest.raises(EbtiiError):
        pid_witnesses(F2X, 1, 50, max_deg=3)


def test_family_sizes_grow_with_the_cap():
    sizes = [len(pid_witnesses(F2X, 1, sum(count_monic_irreducibles(2, d) for d in range(1, k + 1)), max_deg=k))
             for k in (3, 4, 5)]
    assert sizes == sorted(sizes) and len(set(sizes)) == 3


def test_push_doubles_endolength():
    img = push_witnesses(Z2, pid_witnesses(F2X, 1, 6))
    assert img.endolength == 2 and img.over == "Lambda"
    assert img.info["bound_ok"] and img.endolength <= img.info["c_prime"] * img.info["source_endolength"]
    assert len(img) == 6 and img.certificate["ok"]


def test_certify_flags_isomorphic_members():
    E = indec_module(list_atoms(F2X, 1)[0], 2)
    cert = certify([E, E])
    assert not cert["ok"] and cert["isomorphic_pairs"] == [[0, 1]]
    mixed = certify([indec_module(list_atoms(F2X, 1)[0], 1), E])
    assert not mixed["ok"]


def test_ladder_measured_gap():
    lad = ebtii_ladder(Z3, [1, 2, 3], count=4)
    assert lad.endolengths == [2, 4, 6] and lad.strictly_increasing and lad.message == "ok"
    for f in lad.families:
        assert len(f) >= 4 and certify(f.members, seed=31)["ok"]
    assert lad.manifest()["endolengths"] == [2, 4, 6]


def test_ladder_single_level():
    lad = ebtii_ladder(Z3, [2], count=3)
    assert len(lad.families) == 1 and lad.endolengths == [4]


def test_ladder_source_gap_skips_a_level():
    lad = ebtii_ladder(Z2, [1, 2], count=3, gap="source")
    assert lad.endolengths == [2, 6]
    assert [f.level for f in lad.families] == [1, 3]


def test_ladder_level_cap():
    lad = ebtii_ladder(Z2, [1, 2, 3], count=3, gap="source", max_level=4)
    assert lad.endolengths == [2, 6] and "cap" in lad.message


def test_ladder_errors():
    with pytest.raises(EbtiiError):
        ebtii_ladder(Z3, [2, 1])
    with pytest.raises(EbtiiError):
        ebtii_ladder(Z3, [1], gap="loose")


def test_manifest_shape():
    fam = pid_witnesses(F2X, 2, 3)
    m = fam.manifest()
    assert m["size"] == 3 and m["over"] == "Gamma" and len(m["members"]) == 3
    assert isinstance(fam, WitnessFamily)
