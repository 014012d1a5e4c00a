import numpy as np
import pytest

from dilatory.algebra import FdCStarAlgebra, identity_hom
from dilatory.cpmap import OcpMap, tracial_map
from dilatory.dilation import (
    RepMorphism,
    mediating_morphism,
    stinespring_dilate,
    universal_factorization,
)
from dilatory.errors import InvalidHom, NotMorphism
from dilatory.laws import (
    CONTROL_FLOOR,
    check_dagger,
    check_modification,
    check_naturality_m,
    check_oplax,
    check_zigzag,
    counterexample_suite,
    example_27,
    example_28,
    merge_reports,
    objectwise_adjunction_suite,
    partial_isometry_suite,
    run_default_suite,
    _fake_unital_padding,
)
from dilatory.numerics import Tolerance, max_abs
from dilatory.randgen import (
    inflate_rep,
    random_cp_map,
    random_hom,
    random_unitary,
    rng_for,
)

TOL = Tolerance()


def test_law_report_pass_iff_residual_below_eps():
    from dilatory.laws import LawReport

    good = LawReport.from_residual("x", 1e-12, TOL)
    bad = LawReport.from_residual("x", 1e-3, TOL, witness="w")
    assert good.passed and not bad.passed
    assert bad.witnesses == ("w",)
    merged = merge_reports("x", [good, bad])
    assert not merged.passed and merged.max_residual == 1e-3


def test_zigzag_on_canonical_and_inflated():
    rng = rng_for(80, 0)
    phi = random_cp_map(rng, (2,), 2, kraus_rank=2)
    cert = stinespring_dilate(phi, TOL)
    assert check_zigzag(phi, cert.rep, TOL, cert=cert).passed
    inflated = inflate_rep(rng, cert, [1])
    report = check_zigzag(phi, inflated, TOL, cert=cert)
    assert report.passed and report.max_residual <= 1e-10


def test_zigzag_detects_sabotage():
    rng = rng_for(81, 0)
    phi = random_cp_map(rng, (2,), 2, kraus_rank=2)
    cert = stinespring_dilate(phi, TOL)
    med = mediating_morphism(cert.rep, TOL, cert=cert)
    residual = max_abs(1.01 * med.L - np.eye(cert.dimension))
    assert residual >= CONTROL_FLOOR


def test_naturality_positive_and_negative():
    rng = rng_for(82, 0)
    phi = random_cp_map(rng, (2,), 2, kraus_rank=2)
    x = random_unitary(rng, 2)
    psi = OcpMap(phi.domain, 2, tuple(x @ m @ x.conj().T for m in phi.basis_images))
    cert = stinespring_dilate(phi, TOL)
    cert_psi = stinespring_dilate(psi, TOL)
    target = inflate_rep(rng, cert_psi, [1])
    morphism = universal_factorization(x, phi, target, TOL, cert=cert)
    report = check_naturality_m(morphism, cert.rep, target, TOL)
    assert report.passed

    bad = RepMorphism(morphism.T, morphism.L + 0.1)
    with pytest.raises(NotMorphism):
        check_naturality_m(bad, cert.rep, target, TOL)


def test_modification_identity_and_random():
    rng = rng_for(83, 0)
    f = random_hom(rng, FdCStarAlgebra((1, 2)), max_mult=1)
    phi = random_cp_map(rng, f.target.blocks, 2, kraus_rank=2)
    cert = stinespring_dilate(phi, TOL)
    rep = inflate_rep(rng, cert, [1] * len(f.target.blocks))
    assert check_modification(f, rep, TOL).passed
    ident = identity_hom(phi.domain)
    assert check_modification(ident, rep, TOL).passed


def test_modification_rejects_padding_map():
    rng = rng_for(84, 0)
    padded = _fake_unital_padding()
    phi = random_cp_map(rng, (2, 3), 2, kraus_rank=2)
    cert = stinespring_dilate(phi, TOL)
    with pytest.raises(InvalidHom):
        check_modification(padded, cert.rep, TOL)


def test_oplax_identity_chain_and_random():
    rng = rng_for(85, 0)
    f_prime = random_hom(rng, FdCStarAlgebra((2,)), max_mult=1)
    f = random_hom(rng, f_prime.target, max_mult=1)
    phi = random_cp_map(rng, f.target.blocks, 1, kraus_rank=2)
    assert check_oplax(f, f_prime, phi, TOL).passed
    ident = identity_hom(phi.domain)
    assert check_oplax(ident, ident, phi, TOL).passed


def test_dagger_entries():
    phi, psi, t = example_27()
    from dilatory.cpmap import OcpMorphism

    rng = rng_for(86, 0)
    chain = [
        OcpMorphism(tracial_map(2, 2), tracial_map(2, 3), rng.standard_normal((3, 2))),
        OcpMorphism(tracial_map(2, 3), tracial_map(2, 2), rng.standard_normal((2, 3))),
        OcpMorphism(phi, psi, t),
    ]
    cert = stinespring_dilate(phi, TOL)
    target = inflate_rep(rng, stinespring_dilate(psi, TOL), [1])
    morphism = universal_factorization(t, phi, target, TOL, cert=cert)
    chain.append((morphism, cert.rep, target))
    report = check_dagger(chain, TOL)
    assert report.passed


def test_objectwise_adjunction_positive():
    rng = rng_for(87, 0)
    samples = []
    for _ in range(5):
        phi = random_cp_map(rng, (2,), 2, kraus_rank=2)
        x = random_unitary(rng, 2)
        psi = OcpMap(phi.domain, 2, tuple(x @ m @ x.conj().T for m in phi.basis_images))
        target = inflate_rep(rng, stinespring_dilate(psi, TOL), [1])
        samples.append((phi, target, x))
    report = objectwise_adjunction_suite(samples, TOL)
    assert report.passed and report.max_residual <= 1e-9


def test_counterexample_suite_passes():
    report = counterexample_suite(TOL)
    assert report.passed
    assert report.max_residual <= 1e-9


def test_example_fixture_values():
    phi, psi, t = example_27()
    assert phi.k == 1 and psi.k == 2
    assert max_abs(t.conj().T @ t - np.eye(1)) <= 1e-15
    phi2, psi2, t2 = example_28()
    np.testing.assert_allclose(
        psi2.basis_images[phi2.domain.basis_index(0, 0, 0)],
        0.5 * np.eye(2),
        atol=1e-15,
    )


def test_partial_isometry_suite():
    report = partial_isometry_suite(seed=0, draws=60, tol=TOL)
    assert report.passed


def test_padding_map_is_unital_but_not_hom():
    from dilatory.algebra import check_star_hom

    report = check_star_hom(_fake_unital_padding(), TOL)
    assert report.unital and report.star_preserving and not report.multiplicative


def test_default_suite_ok_and_reproducible():
    result1 = run_default_suite(seed=0, draws=6, max_dim=3, tol=TOL)
    result2 = run_default_suite(seed=0, draws=6, max_dim=3, tol=TOL)
    assert result1.ok
    for a, b in zip(result1.reports, result2.reports):
        assert a == b
    for a, b in zip(result1.controls, result2.controls):
        assert a == b
    assert all(
        (not c.passed) and c.max_residual >= CONTROL_FLOOR for c in result1.controls
    )


def test_default_suite_zero_draws():
    result = run_default_suite(seed=0, draws=0, max_dim=3, tol=TOL)
    assert result.ok
    assert result.warnings
    assert result.reports == ()
