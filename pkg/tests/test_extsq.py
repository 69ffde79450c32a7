import numpy as np
import pytest

from stablab.catalog import catalog_group, catalog_names
from stablab.errors import CapExceeded
from stablab.extensions import apply_hom, pushforward
from stablab.extsq import (check_pair_relations, exterior_square,
                           h_of_extension, miller_extension, miller_kernel,
                           pi_bar, pi_bar_hom, schur_covering)
from stablab.gtable import cyclic_table, subgroup_table
from stablab.intmat import AbelianGroup
from stablab.rs import relation_module


def test_extsq_cyclic_is_trivial():
    g = catalog_group("C4")
    sq = exterior_square(g)
    assert sq.table.order == 1
    assert sq.kernel.is_trivial


def test_extsq_v4():
    # V4 ^ V4 = Z/2 (derived subgroup trivial, kernel = multiplier)
    sq = exterior_square(catalog_group("V4"))
    assert sq.table.order == 2
    assert sq.kernel.invariant_factors == (2,)
    assert check_pair_relations(sq)


def test_extsq_s3():
    # S3 ^ S3 = [S3, S3] = C3, trivial multiplier
    sq = exterior_square(catalog_group("S3"))
    assert sq.table.order == 3
    assert sq.kernel.is_trivial
    assert sorted(sq.derived_elements) == sq.derived_elements
    assert len(sq.derived_elements) == 3


def test_miller_kernel_matches_multiplier_small():
    for name in ("V4", "Q8", "D4", "C3xC3", "A4"):
        g = catalog_group(name)
        hopf = relation_module(g.presentation).h2
        assert miller_kernel(g).invariant_factors == hopf.invariant_factors


def test_pair_map_is_biderivation():
    sq = exterior_square(catalog_group("D4"))
    assert check_pair_relations(sq)
    g, t = sq.source, sq.table
    for x in range(g.order):
        assert sq.pair_element(x, x) == t.identity


def test_miller_extension_cocycle():
    sq = exterior_square(catalog_group("Q8"))
    mex = miller_extension(sq)
    assert mex.derived_table.order == len(sq.derived_elements)
    # cocycle values all lie in the kernel fiber
    kset = set(sq.kernel_elements)
    assert all(int(v) in kset for v in mex.cocycle_elements.ravel())


def test_schur_covering_orders():
    for name in ("V4", "D4", "C3xC3"):
        g = catalog_group(name)
        rm = relation_module(g.presentation)
        cover = schur_covering(g, rm=rm)
        assert cover.total.order == g.order * rm.h2.order
        assert cover.kernel.invariant_factors == rm.h2.invariant_factors
        cover.check_central()


def test_covering_h_is_identity():
    # the stem cover classifies itself: h = id on the multiplier basis
    for name in ("V4", "C4xC4", "D4"):
        g = catalog_group(name)
        rm = relation_module(g.presentation)
        cover = schur_covering(g, rm=rm)
        h = h_of_extension(cover, rm=rm)
        eye = np.eye(rm.h2.rank, dtype=int)
        fs = np.array(rm.h2.invariant_factors)
        for i, coords in enumerate(h):
            assert tuple(np.array(coords) % fs) == tuple(eye[i] % fs), name


def test_pi_bar_section_independence():
    g = catalog_group("D4")
    cover = schur_covering(g)
    rng = np.random.default_rng(5)
    base = [[pi_bar(cover, x, y) for y in range(g.order)]
            for x in range(g.order)]
    for _ in range(5):
        s = cover.random_section(rng)
        for x in range(g.order):
            for y in range(g.order):
                assert pi_bar(cover, x, y, section=s) == base[x][y]


def test_pi_bar_extends_to_hom():
    g = catalog_group("Q8")
    sq = exterior_square(g)
    cover = schur_covering(g)
    hom = pi_bar_hom(sq, cover)
    assert hom.shape == (sq.table.order,)


def test_h_naturality_under_pushforward():
    # beta_* e has h = beta o h(e)
    g = catalog_group("C4xC4")
    rm = relation_module(g.presentation)
    cover = schur_covering(g, rm=rm)          # kernel Z/4
    target = AbelianGroup((2,))
    images = [(1,)]                           # Z/4 ->> Z/2
    pf = pushforward(cover, target, images)
    h_cover = h_of_extension(cover, rm=rm)
    h_pf = h_of_extension(pf, rm=rm)
    for hc, hp in zip(h_cover, h_pf):
        pushed = apply_hom(cover.kernel, target, images,
                           np.array(hc, dtype=np.int64))
        assert tuple(pushed) == hp


def test_source_order_cap():
    with pytest.raises(CapExceeded):
        exterior_square(cyclic_table(64))
