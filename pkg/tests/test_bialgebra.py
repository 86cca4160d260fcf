import dataclasses

import numpy as np
import pytest

from trigkz.bialgebra import (
    AlgebraAxiomError,
    AlgebraParseError,
    AlgebraSchemaError,
    AlgebraSpec,
    Representation,
    builtin_algebra,
    casimir_in_rep,
    check_s_compatible,
    classical_r,
    cybe_residual,
    load_algebra,
    r_matrix_terms,
    r_tensor,
    rho_r_in_rep,
    save_algebra,
    serialize_algebra,
    tensor_square_rep,
    validate_spec,
)
from trigkz.supercore import GradedMatrix, SuperSpace, place_single

SL2 = builtin_algebra("sl2")
GL11 = builtin_algebra("gl11")


def abelian_pair():
    # smallest legal even abelian example: B off-diagonal, r = g1 (x) g2
    d = 2
    space = SuperSpace.from_parities([0])
    zero = GradedMatrix.zeros(space, space)
    rep = Representation("zero", space, (zero, zero))
    return AlgebraSpec(
        "abelian2", ("g1", "g2"), (0, 0),
        np.zeros((d, d, d), dtype=complex),
        np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
        plus=(0,), minus=(1,), dual_pairing=((0, 1),), reps={"zero": rep})


def test_builtin_dimensions_and_parities():
    assert SL2.dim == 3 and all(p == 0 for p in SL2.parities)
    assert GL11.dim == 4 and sum(GL11.parities) == 2
    with pytest.raises(KeyError):
        builtin_algebra("e8")


@pytest.mark.parametrize("spec", [SL2, GL11], ids=["sl2", "gl11"])
def test_builtin_axioms(spec):
    report = validate_spec(spec)
    assert report.max_residual < 1e-14, str(report)


@pytest.mark.parametrize("spec", [SL2, GL11], ids=["sl2", "gl11"])
def test_builtin_cybe(spec):
    rep = spec.rep("vector")
    assert cybe_residual(spec, rep) < 1e-14
    # and in the tensor square of the vector representation
    assert cybe_residual(spec, tensor_square_rep(rep)) < 1e-14


def test_tensor_square_rep_is_a_rep():
    for spec in (SL2, GL11):
        sq = tensor_square_rep(spec.rep("vector"))
        spec2 = dataclasses.replace(spec, reps={"sq": sq})
        assert validate_spec(spec2).max_residual < 1e-14


def test_sl2_r_matrix_literal():
    r = classical_r(SL2, SL2.rep("vector"))
    expected = np.diag([0.25, -0.25, -0.25, 0.25]).astype(complex)
    expected[1, 2] = 1.0  # v2 (x) v1 -> v1 (x) v2
    assert np.array_equal(r.data, expected)


def test_sl2_rho_r_literal():
    m = rho_r_in_rep(SL2, SL2.rep("vector"))
    assert np.array_equal(m.data, np.diag([1.25, 0.25]).astype(complex))


def test_abelian_example():
    spec = abelian_pair()
    assert validate_spec(spec).max_residual == 0.0
    assert r_tensor(spec) == [(1.0 + 0j, 0, 1)]
    rep = spec.rep("zero")
    assert cybe_residual(spec, rep) == 0.0
    assert rho_r_in_rep(spec, rep).inf_norm() == 0.0


def test_cybe_detects_dropped_cartan_part():
    # e (x) f alone is not a classical r-matrix for sl2
    rep = SL2.rep("vector")
    res = cybe_residual(SL2, rep, terms=[(1.0 + 0j, 0, 2)])
    assert res > 0.1


def test_perturbed_bracket_fails_jacobi():
    c = SL2.brackets.copy()
    c[1, 0, 0] += 0.1  # [h,e] = 2.1e genuinely breaks jacobi against [e,f] = h
    c[0, 1, 0] -= 0.1  # keep antisymmetry so the failure is jacobi's
    bad = dataclasses.replace(SL2, brackets=c, reps={})
    report = validate_spec(bad)
    res = {it.check: it.residual for it in report.items}
    assert res["jacobi"] > 1e-3
    assert res["antisymmetry"] < 1e-14


def test_perturbed_ef_coefficient_is_caught():
    # perturbing the f-coefficient of [e,h] happens to stay a Lie algebra
    # (absorbable by e -> e - 0.025 f), but validation still fails, through
    # the invariance of the form
    c = SL2.brackets.copy()
    c[0, 1, 2] += 0.1
    c[1, 0, 2] -= 0.1
    bad = dataclasses.replace(SL2, brackets=c, reps={})
    report = validate_spec(bad)
    res = {it.check: it.residual for it in report.items}
    assert res["jacobi"] < 1e-14
    assert res["form-invariant"] > 0.1
    assert not report.ok(1e-10)


def test_isotropy_violation_detected():
    B = SL2.form.copy()
    B[0, 0] = 1.0  # <e, e> != 0
    bad = dataclasses.replace(SL2, form=B, reps={})
    report = validate_spec(bad)
    res = {it.check: it.residual for it in report.items}
    assert res["isotropy-plus"] >= 1.0


def test_casimir_is_flip_symmetric_and_invariant():
    for spec in (SL2, GL11):
        rep = spec.rep("vector")
        om = casimir_in_rep(spec, rep)
        from trigkz.supercore import koszul_flip

        sig = koszul_flip(rep.space, rep.space)
        assert (sig @ om @ sig - om).inf_norm() < 1e-14
        worst = 0.0
        for m in rep.matrices:
            dg = place_single(m, 1, 2) + place_single(m, 2, 2)
            worst = max(worst, (dg @ om - om @ dg).inf_norm())
        assert worst < 1e-12


def test_sl2_casimir_matrix():
    om = casimir_in_rep(SL2, SL2.rep("vector"))
    expected = np.diag([0.5, -0.5, -0.5, 0.5]).astype(complex)
    expected[1, 2] = expected[2, 1] = 1.0
    assert np.allclose(om.data, expected, atol=0)


def test_s_compatibility():
    rep = SL2.rep("vector")
    h_mat = rep.matrices[1]
    assert check_s_compatible(h_mat, SL2, rep) < 1e-14
    zero = GradedMatrix.zeros(rep.space, rep.space)
    assert check_s_compatible(zero, SL2, rep) == 0.0
    e_mat = rep.matrices[0]
    assert check_s_compatible(e_mat, SL2, rep) >= 0.5  # [s^(1)+s^(2), r] = (e(x)h - h(x)e)/2
    # every Cartan element is compatible for gl11
    grep = GL11.rep("vector")
    for i in (0, 1):
        assert check_s_compatible(grep.matrices[i], GL11, grep) < 1e-14
    with pytest.raises(ValueError):
        check_s_compatible(grep.matrices[2], GL11, grep)  # odd s rejected


def test_zero_dimensional_spec_rejected():
    with pytest.raises(ValueError):
        AlgebraSpec("empty", (), (), np.zeros((0, 0, 0)), np.zeros((0, 0)),
                    plus=(), minus=(), dual_pairing=())


# -- file round trips --------------------------------------------------------


@pytest.mark.parametrize("name", ["sl2", "gl11"])
def test_serialize_roundtrip(name, tmp_path):
    spec = builtin_algebra(name)
    path = tmp_path / f"{name}.json"
    save_algebra(spec, path)
    back = load_algebra(path)
    assert back.name == spec.name
    assert back.labels == spec.labels
    assert back.parities == spec.parities
    assert np.array_equal(back.brackets, spec.brackets)
    assert np.array_equal(back.form, spec.form)
    assert back.plus == spec.plus and back.minus == spec.minus
    assert back.cartan == spec.cartan and back.dual_pairing == spec.dual_pairing
    for rname, rep in spec.reps.items():
        brep = back.reps[rname]
        assert brep.space == rep.space
        for m1, m2 in zip(rep.matrices, brep.matrices):
            assert np.array_equal(m1.data, m2.data)


def test_loader_rejects_bad_parity(tmp_path):
    doc = serialize_algebra(SL2)
    doc["basis"][0]["parity"] = 2
    path = tmp_path / "bad.json"
    path.write_text(__import__("json").dumps(doc))
    with pytest.raises(AlgebraSchemaError):
        load_algebra(path)


def test_loader_rejects_unparseable(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{ not json")
    with pytest.raises(AlgebraParseError):
        load_algebra(path)


def test_loader_rejects_non_invariant_form(tmp_path):
    doc = serialize_algebra(SL2)
    doc["form"][1][1] = 3.0  # <h,h> = 3 breaks invariance against <e,f> = 1
    path = tmp_path / "axiom.json"
    path.write_text(__import__("json").dumps(doc))
    with pytest.raises(AlgebraAxiomError) as err:
        load_algebra(path)
    assert "form-invariant" in str(err.value)
