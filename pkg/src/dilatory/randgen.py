"""Seeded random instances: CP maps, homomorphisms, and dilation pairs.

Stream splitting: instance i of a run seeded with s draws from
``numpy.random.default_rng(SeedSequence(entropy=s, spawn_key=(i,)))``, so
parallel generation is reproducible and independent of evaluation order.
CP maps are generated through Kraus families, which guarantees complete
positivity by construction.
"""

from __future__ import annotations

import numpy as np

from . import numerics
from .algebra import AlgebraElement, FdCStarAlgebra, StarHom
from .cpmap import OcpMap, kraus_map
from .dilation import AnchoredRep, DilationCertificate, stinespring_dilate
from .errors import ShapeMismatch
from .numerics import Tolerance, dagger, kron


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for instance ``index`` of the stream seeded with ``seed``."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    )


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary from a QR decomposition with phase normalization."""
    q, r = np.linalg.qr(complex_gaussian(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    if cols > rows:
        raise ShapeMismatch("an isometry needs rows >= cols")
    return random_unitary(rng, rows)[:, :cols]


def random_cp_map(
    rng: np.random.Generator,
    blocks,
    k: int,
    kraus_rank: int = 2,
    unital: bool = False,
) -> OcpMap:
    """Random CP map on the given algebra via Kraus families per block.

    With ``unital`` the family is renormalized by phi(1)^{-1/2} on both
    sides, which keeps complete positivity and enforces phi(1) = 1 whenever
    phi(1) is invertible.
    """
    algebra = FdCStarAlgebra(tuple(blocks))
    if kraus_rank < 1:
        raise ShapeMismatch("kraus_rank must be at least 1")
    families = [
        [complex_gaussian(rng, k, n) for _ in range(kraus_rank)] for n in algebra.blocks
    ]
    if unital:
        total = numerics.zeros(k, k)
        for family in families:
            for t in family:
                total += t @ dagger(t)
        w, u = np.linalg.eigh(total)
        if w[0] <= 1e-12 * max(float(w[-1]), 1.0):
            raise ShapeMismatch(
                "phi(1) is singular; raise kraus_rank to renormalize to a unital map"
            )
        inv_root = (u / np.sqrt(w)[None, :]) @ dagger(u)
        families = [[inv_root @ t for t in family] for family in families]
    return kraus_map(families, algebra, k)


def random_multiplicities(rng: np.random.Generator, source: FdCStarAlgebra, max_mult: int = 2):
    """A multiplicity row per target block, each with at least one copy."""
    t = int(rng.integers(1, 3))
    rows = []
    for _ in range(t):
        while True:
            row = [int(rng.integers(0, max_mult + 1)) for _ in source.blocks]
            if sum(row) > 0:
                rows.append(row)
                break
    return rows


def hom_from_multiplicities(
    source: FdCStarAlgebra, mult_rows, unitaries=None
) -> StarHom:
    """Unital *-homomorphism determined by copy counts per target block.

    Target block i carries mult_rows[i][j] copies of source block j, arranged
    as 1_mult (x) a_j and conjugated by the given (or identity) unitary.
    """
    rows = [list(r) for r in mult_rows]
    target_blocks = []
    for row in rows:
        if len(row) != source.num_blocks or sum(row) == 0:
            raise ShapeMismatch("each target block needs at least one source copy")
        target_blocks.append(sum(m * n for m, n in zip(row, source.blocks)))
    target = FdCStarAlgebra(tuple(target_blocks))
    if unitaries is None:
        unitaries = [numerics.eye(m) for m in target_blocks]

    images = []
    for j, a, b in source.basis_labels():
        n = source.blocks[j]
        e = numerics.zeros(n, n)
        e[a, b] = 1.0
        data = []
        for i, row in enumerate(rows):
            pieces = []
            for jj, (m, nn) in enumerate(zip(row, source.blocks)):
                if m == 0:
                    continue
                if jj == j:
                    pieces.append(kron(numerics.eye(m), e))
                else:
                    pieces.append(numerics.zeros(m * nn, m * nn))
            block = numerics.block_diag(pieces)
            u = unitaries[i]
            data.append(u @ block @ dagger(u))
        images.append(AlgebraElement(target, tuple(data)))
    return StarHom(source, target, tuple(images))


def random_hom(rng: np.random.Generator, source: FdCStarAlgebra, max_mult: int = 2) -> StarHom:
    rows = random_multiplicities(rng, source, max_mult)
    target_blocks = [sum(m * n for m, n in zip(row, source.blocks)) for row in rows]
    unitaries = [random_unitary(rng, m) for m in target_blocks]
    return hom_from_multiplicities(source, rows, unitaries)


def boxplus_rep_images(algebra: FdCStarAlgebra, mults) -> list[np.ndarray]:
    """Basis images of the representation a -> boxplus_j (a_j (x) 1_{c_j})."""
    images = []
    for j, a, b in algebra.basis_labels():
        n = algebra.blocks[j]
        e = numerics.zeros(n, n)
        e[a, b] = 1.0
        pieces = []
        for i, (nn, c) in enumerate(zip(algebra.blocks, mults)):
            if c == 0:
                continue
            pieces.append(kron(e, numerics.eye(c)) if i == j else numerics.zeros(nn * c, nn * c))
        images.append(numerics.block_diag(pieces))
    return images


def inflate_rep(
    rng: np.random.Generator,
    cert: DilationCertificate,
    extra_mults,
    conjugate: bool = True,
) -> AnchoredRep:
    """Dilation plus a junk summand the anchor never reaches.

    The junk representation carries the requested extra multiplicities; the
    whole thing is optionally conjugated by a random unitary.  The
    restriction is unchanged, so the result is a non-minimal Stinespring
    representation of the same map whenever the extra multiplicities are
    nonzero.
    """
    rep = cert.rep
    algebra = rep.algebra
    extra = list(extra_mults)
    if len(extra) != algebra.num_blocks:
        raise ShapeMismatch("one extra multiplicity per block required")
    junk_dim = sum(n * c for n, c in zip(algebra.blocks, extra))
    if junk_dim == 0:
        images = list(rep.pi_images)
        v = rep.V
        h = rep.h
    else:
        junk = boxplus_rep_images(algebra, extra)
        h = rep.h + junk_dim
        images = [numerics.block_diag([a, b]) for a, b in zip(rep.pi_images, junk)]
        v = np.vstack([rep.V, numerics.zeros(junk_dim, rep.k)])
    if conjugate:
        x = random_unitary(rng, h)
        images = [x @ img @ dagger(x) for img in images]
        v = x @ v
    return AnchoredRep(algebra, rep.k, h, tuple(images), v)


def random_dilation_pair(
    rng: np.random.Generator,
    blocks,
    k: int,
    tol: Tolerance,
    extra1=None,
    extra2=None,
    kraus_rank: int = 2,
):
    """Two Stinespring representations of one random CP map.

    ``extra1``/``extra2`` are the junk multiplicities added to each side; equal
    vectors give unitarily equivalent representations, different ones give the
    inequivalent pairs used to exercise the partial purification.
    """
    algebra = FdCStarAlgebra(tuple(blocks))
    phi = random_cp_map(rng, blocks, k, kraus_rank=kraus_rank)
    cert = stinespring_dilate(phi, tol)
    zero = [0] * algebra.num_blocks
    rep1 = inflate_rep(rng, cert, extra1 if extra1 is not None else zero)
    rep2 = inflate_rep(rng, cert, extra2 if extra2 is not None else zero)
    return phi, cert, rep1, rep2
