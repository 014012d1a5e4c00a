"""Numerical verifiers for the categorical content of the construction.

Everything 2-categorical is checked by evaluation at concrete algebras, maps,
and homomorphisms: the zig-zag identities, naturality of the mediating
morphism, the comparison triangle for algebra maps, oplax composition, dagger
laws, and the objectwise universal property of the adjunction.  Each checker
returns a LawReport whose pass flag is equivalent to its residual being below
eps_eq.  The default suite mixes positive ensembles with negative controls
(sabotaged data that must fail loudly), so a tolerance bug cannot silently
turn every check green.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .algebra import (
    AlgebraElement,
    FdCStarAlgebra,
    StarHom,
    check_star_hom,
    compose_homs,
    identity_hom,
)
from .cpmap import (
    OcpMap,
    OcpMorphism,
    check_morphism_variants,
    compose_morphisms,
    dagger_morphism,
    is_ocp_morphism,
    pullback,
    tracial_map,
)
from .dilation import (
    AnchoredRep,
    DilationCertificate,
    RepMorphism,
    is_rep_morphism,
    mediating_morphism,
    pullback_rep,
    restrict,
    stine_f,
    stine_on_morphism,
    stinespring_dilate,
    universal_factorization,
)
from .errors import InvalidHom, NotMorphism
from .geometry import partial_isometry_report
from .numerics import DEFAULT_TOL, Tolerance, dagger, kron, max_abs
from .randgen import (
    inflate_rep,
    random_cp_map,
    random_hom,
    random_unitary,
    rng_for,
)

CONTROL_FLOOR = 1e-3


@dataclass(frozen=True)
class LawReport:
    """One verified law: name, worst residual, and offending inputs if any."""

    name: str
    max_residual: float
    passed: bool
    witnesses: tuple[str, ...] = ()

    @staticmethod
    def from_residual(name: str, residual: float, tol: Tolerance, witness: str = ""):
        ok = residual <= tol.eps_eq
        witnesses = () if ok or not witness else (witness,)
        return LawReport(name, float(residual), ok, witnesses)


def merge_reports(name: str, reports) -> LawReport:
    reports = list(reports)
    if not reports:
        return LawReport(name, 0.0, True, ())
    worst = max(r.max_residual for r in reports)
    witnesses = tuple(w for r in reports for w in r.witnesses)
    return LawReport(name, worst, all(r.passed for r in reports), witnesses)


def check_zigzag(
    phi: OcpMap,
    rep: AnchoredRep,
    tol: Tolerance = DEFAULT_TOL,
    cert: DilationCertificate | None = None,
) -> LawReport:
    """Both triangle identities of the adjunction at one object pair.

    The restriction of any mediating morphism has identity component by
    construction, and the mediating morphism of the canonical dilation of phi
    must itself be the identity.
    """
    rep_med = mediating_morphism(rep, tol)
    first = max_abs(rep_med.T - numerics.eye(rep.k))
    cert = cert if cert is not None else stinespring_dilate(phi, tol)
    self_med = mediating_morphism(cert.rep, tol, cert=cert)
    second = max_abs(self_med.L - numerics.eye(cert.rep.h))
    residual = max(first, second)
    return LawReport.from_residual(
        "zigzag", residual, tol, f"phi on {phi.domain.blocks}, k={phi.k}"
    )


def check_naturality_m(
    morphism: RepMorphism,
    src: AnchoredRep,
    dst: AnchoredRep,
    tol: Tolerance = DEFAULT_TOL,
) -> LawReport:
    """Naturality square of m: m_dst after L_T equals L after m_src."""
    report = is_rep_morphism(morphism, src, dst, tol)
    if not report.ok:
        raise NotMorphism(f"not a morphism of anchored representations: {report.residuals}")
    phi = restrict(src)
    psi = restrict(dst)
    cert_phi = stinespring_dilate(phi, tol, check_cp=False)
    cert_psi = stinespring_dilate(psi, tol, check_cp=False)
    l_t = stine_on_morphism(morphism.T, phi, psi, tol, src_cert=cert_phi, dst_cert=cert_psi)
    m_src = mediating_morphism(src, tol, cert=cert_phi)
    m_dst = mediating_morphism(dst, tol, cert=cert_psi)
    residual = max_abs(m_dst.L @ l_t.L - morphism.L @ m_src.L)
    return LawReport.from_residual("naturality_m", residual, tol)


def check_modification(
    f: StarHom, rep: AnchoredRep, tol: Tolerance = DEFAULT_TOL
) -> LawReport:
    """Comparison triangle: m of the pulled-back representation factors as
    m of the original composed with L_f."""
    hom_report = check_star_hom(f, tol)
    if not hom_report.ok:
        raise InvalidHom(f"not a *-homomorphism: {hom_report.residuals}")
    phi = restrict(rep)
    cert = stinespring_dilate(phi, tol, check_cp=False)
    phi_f = pullback(phi, f, tol)
    pulled_cert = stinespring_dilate(phi_f, tol, check_cp=False)
    l_f = stine_f(phi, f, tol, cert=cert, pulled_cert=pulled_cert)
    pulled = pullback_rep(rep, f)
    m_pulled = mediating_morphism(pulled, tol, cert=pulled_cert)
    m_orig = mediating_morphism(rep, tol, cert=cert)
    residual = max_abs(m_pulled.L - m_orig.L @ l_f.L)
    return LawReport.from_residual("modification", residual, tol)


def check_oplax(
    f: StarHom, f_prime: StarHom, phi: OcpMap, tol: Tolerance = DEFAULT_TOL
) -> LawReport:
    """Oplax composition: L over a composite equals the composite of the L's,
    and the identity homomorphism induces the identity."""
    for hom in (f, f_prime):
        hom_report = check_star_hom(hom, tol)
        if not hom_report.ok:
            raise InvalidHom(f"not a *-homomorphism: {hom_report.residuals}")
    cert = stinespring_dilate(phi, tol, check_cp=False)
    phi_f = pullback(phi, f, tol)
    cert_f = stinespring_dilate(phi_f, tol, check_cp=False)
    phi_ff = pullback(phi_f, f_prime, tol)
    cert_ff = stinespring_dilate(phi_ff, tol, check_cp=False)

    l_f = stine_f(phi, f, tol, cert=cert, pulled_cert=cert_f)
    l_fp = stine_f(phi_f, f_prime, tol, cert=cert_f, pulled_cert=cert_ff)
    l_comp = stine_f(phi, compose_homs(f, f_prime), tol, cert=cert, pulled_cert=cert_ff)
    residual = max_abs(l_comp.L - l_f.L @ l_fp.L)

    l_id = stine_f(phi, identity_hom(phi.domain), tol, cert=cert, pulled_cert=cert)
    residual = max(residual, max_abs(l_id.L - numerics.eye(cert.rep.h)))
    return LawReport.from_residual("oplax", residual, tol)


def check_dagger(entries, tol: Tolerance = DEFAULT_TOL) -> LawReport:
    """Dagger laws on a list of morphisms.

    Entries are OcpMorphism values or (RepMorphism, src, dst) triples.  For
    each one the adjoint must be a valid morphism in the opposite direction
    and the involution must be exact; consecutive composable OCP entries also
    get the contravariance identity (g f)* = f* g*.
    """
    residual = 0.0
    witnesses = []
    ocp_entries = []
    for entry in entries:
        if isinstance(entry, OcpMorphism):
            ocp_entries.append(entry)
            flipped = dagger_morphism(entry, tol)
            ok, res = is_ocp_morphism(flipped.T, flipped.source, flipped.target, tol)
            residual = max(residual, res)
            if not ok:
                witnesses.append("dagger of an OCP morphism failed validity")
            residual = max(residual, max_abs(dagger(flipped.T) - entry.T))
        else:
            morphism, src, dst = entry
            report = is_rep_morphism(morphism, src, dst, tol)
            if not report.ok:
                raise NotMorphism(f"invalid entry: {report.residuals}")
            flipped = RepMorphism(dagger(morphism.T), dagger(morphism.L))
            back = is_rep_morphism(flipped, dst, src, tol)
            residual = max(residual, max(back.residuals.values()))
            if not back.ok:
                witnesses.append("dagger of a representation morphism failed validity")
            residual = max(residual, max_abs(dagger(flipped.L) - morphism.L))
    for g, f_ in zip(ocp_entries[1:], ocp_entries[:-1]):
        if g.source.k == f_.target.k and g.source.domain.blocks == f_.target.domain.blocks:
            composite = compose_morphisms(g, f_)
            residual = max(
                residual,
                max_abs(dagger(composite.T) - dagger(f_.T) @ dagger(g.T)),
            )
    ok = residual <= tol.eps_eq and not witnesses
    return LawReport("dagger", float(residual), ok, tuple(witnesses))


def objectwise_adjunction_suite(samples, tol: Tolerance = DEFAULT_TOL) -> LawReport:
    """Universal property at sampled objects.

    For each (phi, target, T) with T a morphism into the restriction of the
    target: the factorization through the counit reproduces
    universal_factorization, restricts back to T on the nose, and passes the
    morphism checks.
    """
    reports = []
    for phi, target, t in samples:
        psi = restrict(target)
        cert_phi = stinespring_dilate(phi, tol, check_cp=False)
        cert_psi = stinespring_dilate(psi, tol, check_cp=False)
        univ = universal_factorization(t, phi, target, tol, cert=cert_phi)
        l_t = stine_on_morphism(t, phi, psi, tol, src_cert=cert_phi, dst_cert=cert_psi)
        counit = mediating_morphism(target, tol, cert=cert_psi)
        residual = max_abs(univ.L - counit.L @ l_t.L)
        residual = max(residual, max_abs(univ.T - numerics.as_matrix(t)))
        validity = is_rep_morphism(univ, cert_phi.rep, target, tol)
        residual = max(residual, max(validity.residuals.values()))
        reports.append(LawReport.from_residual("objectwise_adjunction", residual, tol))
    return merge_reports("objectwise_adjunction", reports)


def example_27():
    """Half-trace state, its inflation to M_2, and the skew isometry.

    The data where the intertwining square commutes but conjugation onto the
    target does not."""
    phi = tracial_map(2, 1)
    psi = tracial_map(2, 2)
    t = np.array([[1.0], [1.0]], dtype=np.complex128) / np.sqrt(2.0)
    return phi, psi, t


def example_28():
    """Half-trace state against the bit-flip average, anchored at e_1.

    The data where conjugation back commutes but the intertwining square
    fails."""
    phi = tracial_map(2, 1)
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    domain = phi.domain
    images = []
    for _, a, b in domain.basis_labels():
        e = numerics.zeros(2, 2)
        e[a, b] = 1.0
        images.append(0.5 * e + 0.5 * (x @ e @ x))
    psi = OcpMap(domain, 2, tuple(images))
    t = np.array([[1.0], [0.0]], dtype=np.complex128)
    return phi, psi, t


def counterexample_suite(tol: Tolerance = DEFAULT_TOL) -> LawReport:
    """Fidelity of the two worked counterexamples.

    The first must realize the pattern (23 false, 22 true, 24 true) with the
    conjugation violation of operator norm exactly 1 on the unit; the second
    realizes (false, false, true) with intertwining violation at least 0.4 on
    the off-diagonal unit E_12.
    """
    residual = 0.0
    witnesses = []

    phi, psi, t = example_27()
    variants = check_morphism_variants(t, phi, psi, tol)
    if (variants.diagram_23, variants.diagram_22, variants.diagram_24) != (
        False,
        True,
        True,
    ):
        witnesses.append("first counterexample pattern mismatch")
        residual = max(residual, 1.0)
    unit_image = sum(
        phi.basis_images[phi.domain.basis_index(0, a, a)] for a in range(2)
    )
    violation = numerics.op_norm(t @ unit_image @ dagger(t) - numerics.eye(2))
    residual = max(residual, abs(violation - 1.0))

    phi2, psi2, t2 = example_28()
    variants2 = check_morphism_variants(t2, phi2, psi2, tol)
    if (variants2.diagram_23, variants2.diagram_22, variants2.diagram_24) != (
        False,
        False,
        True,
    ):
        witnesses.append("second counterexample pattern mismatch")
        residual = max(residual, 1.0)
    e12 = phi2.domain.basis_index(0, 0, 1)
    violation2 = max_abs(
        t2 @ phi2.basis_images[e12] - psi2.basis_images[e12] @ t2
    )
    if violation2 < 0.4:
        witnesses.append(f"second counterexample violation {violation2:.3f} < 0.4")
        residual = max(residual, 0.4 - violation2)

    ok = residual <= tol.eps_eq and not witnesses
    return LawReport("counterexamples", float(residual), ok, tuple(witnesses))


def _random_partial_isometry(rng, rows, cols, rank):
    u = random_unitary(rng, rows)[:, :rank]
    v = random_unitary(rng, cols)[:, :rank]
    return u @ dagger(v)


def partial_isometry_suite(
    seed: int = 0, draws: int = 100, tol: Tolerance = DEFAULT_TOL
) -> LawReport:
    """Dual-definition agreement and tensor stability of partial isometries.

    Clean and visibly perturbed samples must be classified identically by the
    algebraic test and the restricted-isometry test; tensoring with an
    identity must preserve the verdict in both directions; and the classical
    pair of projections witnesses that composites can fail to be partial
    isometries.
    """
    residual = 0.0
    witnesses = []
    for i in range(draws):
        rng = rng_for(seed, i)
        rows = int(rng.integers(1, 5))
        cols = int(rng.integers(1, 5))
        rank = int(rng.integers(0, min(rows, cols) + 1))
        clean = _random_partial_isometry(rng, rows, cols, rank)
        noisy = clean + 1e-3 * (rng.standard_normal(clean.shape))
        for sample in (clean, noisy):
            report = partial_isometry_report(sample, tol)
            if report.is_partial_isometry != report.restricted_isometry_ok:
                witnesses.append(f"dual definitions disagree at draw {i}")
                residual = max(residual, 1.0)
        m = int(rng.integers(1, 4))
        lifted = kron(numerics.eye(m), clean)
        if not partial_isometry_report(lifted, tol).is_partial_isometry:
            witnesses.append(f"kron broke a partial isometry at draw {i}")
            residual = max(residual, 1.0)
        lifted_noisy = kron(numerics.eye(m), noisy)
        if rank > 0 and partial_isometry_report(lifted_noisy, tol).is_partial_isometry:
            witnesses.append(f"kron hid a defect at draw {i}")
            residual = max(residual, 1.0)

    # the projections onto span{e1} and span{(e1+e2)/sqrt(2)} do not compose
    p = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    q = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=np.complex128)
    composite = partial_isometry_report(p @ q, tol)
    if composite.is_partial_isometry or composite.residual < CONTROL_FLOOR:
        witnesses.append("projection composite unexpectedly passed")
        residual = max(residual, 1.0)

    ok = residual <= tol.eps_eq and not witnesses
    return LawReport("partial_isometries", float(residual), ok, tuple(witnesses))


@dataclass(frozen=True)
class SuiteResult:
    """Positive law reports plus negative controls that must fail."""

    reports: tuple[LawReport, ...]
    controls: tuple[LawReport, ...]
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        positives = all(r.passed for r in self.reports)
        negatives = all(
            (not c.passed) and c.max_residual >= CONTROL_FLOOR for c in self.controls
        )
        return positives and negatives

    def first_failure(self):
        for r in self.reports:
            if not r.passed:
                return r
        for c in self.controls:
            if c.passed or c.max_residual < CONTROL_FLOOR:
                return LawReport(
                    f"control:{c.name}", c.max_residual, False, c.witnesses
                )
        return None


def _draw_blocks(rng, max_dim):
    sizes = [n for n in (1, 2, 3) if n <= max_dim] or [1]
    count = int(rng.integers(1, 3))
    return tuple(int(rng.choice(sizes)) for _ in range(count))


def _morphism_sample(rng, max_dim, tol):
    """A valid triple (phi, psi, T): conjugate a random map by a unitary."""
    blocks = _draw_blocks(rng, max_dim)
    k = int(rng.integers(1, min(3, max_dim) + 1))
    phi = random_cp_map(rng, blocks, k, kraus_rank=2)
    x = random_unitary(rng, k)
    psi = OcpMap(phi.domain, k, tuple(x @ img @ dagger(x) for img in phi.basis_images))
    return phi, psi, x


def _tracial_sample(rng, max_dim):
    """Tracial maps admit arbitrary rectangular T as morphisms."""
    m = int(rng.integers(2, max(3, max_dim) + 1))
    p = int(rng.integers(1, 4))
    q = int(rng.integers(1, 4))
    t = (rng.standard_normal((q, p)) + 1j * rng.standard_normal((q, p))) / np.sqrt(2.0)
    return tracial_map(m, p), tracial_map(m, q), t


def _transported_morphism(t, phi, psi, src_rep, dst_rep, tol, cert_phi, cert_psi):
    """A morphism between two arbitrary dilations: conjugate L_T by the
    mediating isometries of both sides."""
    l_t = stine_on_morphism(t, phi, psi, tol, src_cert=cert_phi, dst_cert=cert_psi)
    m_src = mediating_morphism(src_rep, tol, cert=cert_phi)
    m_dst = mediating_morphism(dst_rep, tol, cert=cert_psi)
    return RepMorphism(l_t.T, m_dst.L @ l_t.L @ dagger(m_src.L))


def run_default_suite(
    seed: int = 0,
    draws: int = 100,
    max_dim: int = 3,
    tol: Tolerance = DEFAULT_TOL,
) -> SuiteResult:
    """The full verification ensemble behind the `laws` CLI command."""
    warnings = []
    if draws <= 0:
        warnings.append("draws <= 0: nothing sampled, suite passes vacuously")
        return SuiteResult((), (), tuple(warnings))

    zigzag = []
    naturality = []
    modification = []
    oplax = []
    dagger_entries = []
    adjunction_samples = []

    for i in range(draws):
        rng = rng_for(seed, i)
        blocks = _draw_blocks(rng, max_dim)
        k = int(rng.integers(1, min(3, max_dim) + 1))
        phi = random_cp_map(rng, blocks, k, kraus_rank=2)
        cert = stinespring_dilate(phi, tol)
        extra = [int(rng.integers(0, 2)) for _ in blocks]
        rep = inflate_rep(rng, cert, extra)
        zigzag.append(check_zigzag(phi, rep, tol, cert=cert))

        if i % 3 == 2:
            phi_m, psi_m, t_m = _tracial_sample(rng, max_dim)
        else:
            phi_m, psi_m, t_m = _morphism_sample(rng, max_dim, tol)
        cert_m = stinespring_dilate(phi_m, tol)
        extra_m = [int(rng.integers(0, 2)) for _ in phi_m.domain.blocks]
        cert_psi = stinespring_dilate(psi_m, tol)
        target = inflate_rep(rng, cert_psi, extra_m)
        morphism = universal_factorization(t_m, phi_m, target, tol, cert=cert_m)
        naturality.append(
            check_naturality_m(morphism, cert_m.rep, target, tol)
        )
        # morphisms between two inflated dilations, neither of them canonical
        src_inflated = inflate_rep(rng, cert_m, extra_m)
        between = _transported_morphism(
            t_m, phi_m, psi_m, src_inflated, target, tol, cert_m, cert_psi
        )
        naturality.append(check_naturality_m(between, src_inflated, target, tol))
        adjunction_samples.append((phi_m, target, t_m))
        dagger_entries.append(OcpMorphism(phi_m, psi_m, t_m))
        dagger_entries.append((morphism, cert_m.rep, target))
        dagger_entries.append((between, src_inflated, target))

        # hom-first sampling so unital embeddings always exist
        f = random_hom(rng, FdCStarAlgebra(_draw_blocks(rng, 2)), max_mult=1)
        phi_top = random_cp_map(rng, f.target.blocks, int(rng.integers(1, 3)), kraus_rank=2)
        cert_top = stinespring_dilate(phi_top, tol)
        extra_top = [int(rng.integers(0, 2)) for _ in f.target.blocks]
        rep_top = inflate_rep(rng, cert_top, extra_top)
        modification.append(check_modification(f, rep_top, tol))

        f_prime = random_hom(rng, FdCStarAlgebra(_draw_blocks(rng, 2)), max_mult=1)
        f_outer = random_hom(rng, f_prime.target, max_mult=1)
        phi_chain = random_cp_map(rng, f_outer.target.blocks, 1, kraus_rank=2)
        oplax.append(check_oplax(f_outer, f_prime, phi_chain, tol))

    reports = [
        merge_reports("zigzag", zigzag),
        merge_reports("naturality_m", naturality),
        merge_reports("modification", modification),
        merge_reports("oplax", oplax),
        check_dagger(dagger_entries, tol),
        objectwise_adjunction_suite(adjunction_samples, tol),
        counterexample_suite(tol),
        partial_isometry_suite(seed, min(draws * 5, 500), tol),
    ]
    controls = _negative_controls(seed, tol)
    return SuiteResult(tuple(reports), tuple(controls), tuple(warnings))


def _negative_controls(seed: int, tol: Tolerance) -> list[LawReport]:
    """Deliberately broken instances; each report must come back failing."""
    rng = rng_for(seed, 10_000)
    controls = []

    # mediating morphism scaled off unity breaks the second zig-zag
    phi = random_cp_map(rng, (2,), 2, kraus_rank=2)
    cert = stinespring_dilate(phi, tol)
    med = mediating_morphism(cert.rep, tol, cert=cert)
    sabotage = max_abs(1.01 * med.L - numerics.eye(cert.rep.h))
    controls.append(LawReport.from_residual("control_sabotaged_mediating", sabotage, tol))

    # a random L is not natural
    phi_m, psi_m, t_m = _morphism_sample(rng, 3, tol)
    cert_m = stinespring_dilate(phi_m, tol)
    cert_p = stinespring_dilate(psi_m, tol)
    l_t = stine_on_morphism(t_m, phi_m, psi_m, tol, src_cert=cert_m, dst_cert=cert_p)
    bad_l = l_t.L + 0.1 * numerics.as_matrix(
        rng.standard_normal(l_t.L.shape) + 1j * rng.standard_normal(l_t.L.shape)
    )
    m_src = mediating_morphism(cert_m.rep, tol, cert=cert_m)
    m_dst = mediating_morphism(cert_p.rep, tol, cert=cert_p)
    residual = max_abs(m_dst.L @ l_t.L - bad_l @ m_src.L)
    controls.append(LawReport.from_residual("control_non_morphism_naturality", residual, tol))

    # scrambling the quotient coordinates of the middle dilation breaks oplax
    f_prime = random_hom(rng, FdCStarAlgebra((2,)), max_mult=1)
    f_outer = random_hom(rng, f_prime.target, max_mult=1)
    phi_chain = random_cp_map(rng, f_outer.target.blocks, 1, kraus_rank=2)
    cert0 = stinespring_dilate(phi_chain, tol)
    phi_f = pullback(phi_chain, f_outer, tol)
    cert1 = stinespring_dilate(phi_f, tol, check_cp=False)
    phi_ff = pullback(phi_f, f_prime, tol)
    cert2 = stinespring_dilate(phi_ff, tol, check_cp=False)
    scrambled_q = np.roll(cert1.Q, 1, axis=0).copy()
    scrambled_q[0, :] *= 2.0
    scrambled = DilationCertificate(
        rep=cert1.rep,
        source=cert1.source,
        Q=scrambled_q,
        q_pinv=cert1.q_pinv,
        gram_eigenvalues=cert1.gram_eigenvalues,
        tol=cert1.tol,
        rank_unstable=cert1.rank_unstable,
        residuals=cert1.residuals,
    )
    l_f = stine_f(phi_chain, f_outer, tol, cert=cert0, pulled_cert=scrambled)
    l_fp = stine_f(phi_f, f_prime, tol, cert=scrambled, pulled_cert=cert2)
    l_comp = stine_f(phi_chain, compose_homs(f_outer, f_prime), tol, cert=cert0, pulled_cert=cert2)
    residual = max_abs(l_comp.L - l_f.L @ l_fp.L)
    controls.append(LawReport.from_residual("control_scrambled_quotient", residual, tol))

    # perturbing the counit breaks the objectwise factorization
    phi_a, psi_a, t_a = _morphism_sample(rng, 3, tol)
    cert_a = stinespring_dilate(phi_a, tol)
    cert_b = stinespring_dilate(psi_a, tol)
    target = inflate_rep(rng, cert_b, [1] * len(psi_a.domain.blocks))
    univ = universal_factorization(t_a, phi_a, target, tol, cert=cert_a)
    l_ta = stine_on_morphism(t_a, phi_a, restrict(target), tol, src_cert=cert_a, dst_cert=None)
    counit = mediating_morphism(target, tol)
    residual = max_abs(univ.L - (1.01 * counit.L) @ l_ta.L)
    controls.append(LawReport.from_residual("control_perturbed_counit", residual, tol))

    # the A -> A (+) tr(A)/2 padding is not multiplicative; the gate must say so
    padded = _fake_unital_padding()
    report = check_star_hom(padded, tol)
    controls.append(
        LawReport(
            "control_padding_not_hom",
            float(report.residuals["multiplicative"]),
            report.ok,
            () if not report.ok else ("padding map slipped through the gate",),
        )
    )
    return controls


def _fake_unital_padding() -> StarHom:
    """The unital but non-multiplicative map M_2 -> M_2 (+) M_3."""
    source = FdCStarAlgebra((2,))
    target = FdCStarAlgebra((2, 3))
    images = []
    for _, a, b in source.basis_labels():
        e = numerics.zeros(2, 2)
        e[a, b] = 1.0
        tail = (0.5 if a == b else 0.0) * numerics.eye(3)
        images.append(AlgebraElement(target, (e, tail)))
    return StarHom(source, target, tuple(images))
