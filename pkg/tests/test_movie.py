import itertools

import pytest

from linksn import diagram as dg
from linksn import lee
from linksn import movie as mv
from linksn.errors import InapplicableMove, NotEndingInUnlink

TREFOIL = dg.parse_braid([1, 1, 1], 2)
HOPF = dg.parse_braid([1, 1], 2)


def genus1_trefoil_movie():
    """Fission, fusion, then unkinking: chi = -2, ends in one circle."""
    return mv.Movie(TREFOIL, [
        mv.Move("H1", edges=(1, 3), comment="fission"),
        mv.Move("H1", edges=(2, 4), comment="fusion"),
        mv.Move("R1+", crossings=(1,)),
        mv.Move("R1+", crossings=(0,)),
        mv.Move("R1+", crossings=(0,)),
    ])


# -- single moves -------------------------------------------------------------


def test_h0_adds_circle():
    d = mv.apply_move(TREFOIL, mv.Move("H0"))
    assert d.n_components == TREFOIL.n_components + 1
    assert len(d.loops) == 1


def test_h2_needs_free_circle():
    d = mv.apply_move(TREFOIL, mv.Move("H0"))
    back = mv.apply_move(d, mv.Move("H2", edges=d.loops))
    assert back.same_diagram(TREFOIL)
    with pytest.raises(InapplicableMove):
        mv.apply_move(TREFOIL, mv.Move("H2", edges=(1,)))


def test_h1_fusion_and_fission():
    fused = mv.apply_move(HOPF, mv.Move("H1", edges=(1, 4)))
    assert fused.n_components == 1
    split = mv.apply_move(TREFOIL, mv.Move("H1", edges=(1, 3)))
    assert split.n_components == 2


def test_r1_insert_remove_roundtrip():
    for kind in ("R1+", "R1-"):
        d = mv.apply_move(TREFOIL, mv.Move(kind, edges=(1,)))
        assert d.n_crossings == 4
        assert lee.s2(d) == -2
        k = d.n_crossings - 1
        back = mv.apply_move(d, mv.Move(kind, crossings=(k,)))
        assert back.same_diagram(TREFOIL)


def test_r1_kink_on_circle():
    d = mv.apply_move(dg.unknot(), mv.Move("R1+", edges=(1,)))
    assert d.n_crossings == 1 and d.n_components == 1
    back = mv.apply_move(d, mv.Move("R1+", crossings=(0,)))
    assert back.same_diagram(dg.unknot())


def test_r1_wrong_sign():
    d = mv.apply_move(TREFOIL, mv.Move("R1+", edges=(1,)))
    with pytest.raises(InapplicableMove):
        mv.apply_move(d, mv.Move("R1-", crossings=(d.n_crossings - 1,)))


def test_r2_insert_remove_roundtrip():
    d = mv.apply_move(TREFOIL, mv.Move("R2", edges=(2, 5)))
    assert d.n_crossings == 5
    assert d.writhe == TREFOIL.writhe
    assert lee.s2(d) == -2
    back = mv.apply_move(d, mv.Move("R2", crossings=(3, 4)))
    assert back.same_diagram(TREFOIL)


def test_r2_on_unlink():
    d = mv.apply_move(dg.unlink(2), mv.Move("R2", edges=(1, 2)))
    assert d.n_crossings == 2 and d.n_components == 2
    assert lee.s2(d) == 1
    back = mv.apply_move(d, mv.Move("R2", crossings=(0, 1)))
    assert back.same_diagram(dg.unlink(2))


def test_r2_rejects_non_bigon():
    with pytest.raises(InapplicableMove):
        mv.apply_move(TREFOIL, mv.Move("R2", crossings=(0, 1)))


def test_r3_preserves_invariants():
    d = dg.parse_braid([1, 2, 1, 2, 2], 3)
    base = (lee.s2(d), lee.build_filtered_complex(d).homology_dimension())
    applied = 0
    for ks in itertools.combinations(range(d.n_crossings), 3):
        try:
            d2 = mv.apply_move(d, mv.Move("R3", crossings=ks))
        except InapplicableMove:
            continue
        applied += 1
        assert (lee.s2(d2),
                lee.build_filtered_complex(d2).homology_dimension()) == base
    assert applied >= 1


# -- replay and ledger ----------------------------------------------------------


def test_validate_genus1_movie():
    ledger = mv.validate_movie(genus1_trefoil_movie())
    assert ledger.chi == -2
    assert ledger.k == 1
    assert ledger.end.n_crossings == 0
    assert ledger.end.n_components == 1
    assert ledger.kinds == ["I", "U", "R", "R", "R"]
    cert = ledger.lemma2_certificate()
    assert cert["applies"]
    # s_2(trefoil) - 1*(-2) >= s_2(unknot), tight
    assert lee.s2(TREFOIL) - ledger.chi == lee.s2(ledger.end)


def test_replay_determinism():
    movie = genus1_trefoil_movie()
    l1, l2 = mv.validate_movie(movie), mv.validate_movie(movie)
    assert l1.chi == l2.chi and l1.kinds == l2.kinds
    assert l1.end.same_diagram(l2.end)


def test_chi_additivity():
    movie = genus1_trefoil_movie()
    full = mv.validate_movie(movie).chi
    first = mv.validate_movie(mv.Movie(TREFOIL, movie.moves[:2])).chi
    mid = mv.validate_movie(mv.Movie(TREFOIL, movie.moves[:2])).end
    second = mv.validate_movie(mv.Movie(mid, movie.moves[2:])).chi
    assert full == first + second


def test_component_count_deltas():
    ledger = mv.validate_movie(genus1_trefoil_movie())
    deltas = [b.n_components - a.n_components
              for a, b in zip(ledger.frames, ledger.frames[1:])]
    assert deltas == [1, -1, 0, 0, 0]


def test_invalid_move_reports_index():
    movie = mv.Movie(TREFOIL, [mv.Move("R1+", crossings=(0,))])
    with pytest.raises(InapplicableMove) as exc:
        mv.validate_movie(movie)
    assert exc.value.index == 0


def test_filtered_degree():
    ledger = mv.validate_movie(genus1_trefoil_movie())
    assert ledger.filtered_degree(2) == 2
    assert ledger.filtered_degree(5) == 8


def test_h0_only_movie():
    ledger = mv.validate_movie(mv.Movie(dg.unknot(), [mv.Move("H0")]))
    assert ledger.chi == 1
    assert ledger.end.n_components == 2
    assert ledger.k == 2
    # a bare birth does not carry the generator to a multiple
    assert not ledger.lemma2_certificate()["applies"]


def test_h0_absorbed_by_fusion():
    u = dg.unknot()
    movie = mv.Movie(u, [mv.Move("H0"), mv.Move("H1", edges=(1, 2))])
    ledger = mv.validate_movie(movie)
    assert ledger.chi == 0
    assert ledger.k == 1
    assert ledger.lemma2_certificate()["applies"]


# -- generator fate ---------------------------------------------------------------


def test_constant_labels_survive():
    survives, end = mv.generator_fate(genus1_trefoil_movie(), (1,))
    assert survives and end == (1,)


def test_unequal_labels_annihilate_under_fusion():
    movie = mv.Movie(HOPF, [mv.Move("H1", edges=(1, 4))])
    assert mv.generator_fate(movie, (1, 1))[0]
    assert not mv.generator_fate(movie, (1, -1))[0]


def test_fission_duplicates_labels():
    movie = mv.Movie(TREFOIL, [mv.Move("H1", edges=(1, 3))])
    survives, end = mv.generator_fate(movie, (-1,))
    assert survives and end == (-1, -1)


# -- ordering ------------------------------------------------------------------


def test_lobb_order_examples():
    u = dg.unknot()
    seq = mv.Movie(u, [mv.Move("H0"),
                       mv.Move("R2", edges=(1, 2)),
                       mv.Move("R2", crossings=(0, 1)),
                       mv.Move("H1", edges=(1, 2)),
                       mv.Move("R1+", edges=(1,)),
                       mv.Move("R1+", crossings=(0,))])
    # O R R U R R: phases 1, 2, 3, 6
    assert mv.check_lobb_order(seq)

    bad = mv.Movie(TREFOIL, [mv.Move("H1", edges=(1, 3)), mv.Move("H0")])
    check = mv.check_lobb_order(bad)
    assert not check
    assert check.index == 1


def test_lobb_order_genus1():
    assert mv.check_lobb_order(genus1_trefoil_movie())


def test_lobb_order_rejects_fission_after_death():
    u3 = dg.unlink(3)
    movie = mv.Movie(u3, [mv.Move("H2", edges=(3,)),
                          mv.Move("H1", edges=(1, 1))])
    check = mv.check_lobb_order(movie)
    assert not check and check.index == 1


# -- certificates -----------------------------------------------------------------


def test_slice_certificate_trefoil():
    cert = mv.slice_certificate(genus1_trefoil_movie(), 2)
    assert cert.chi_movie == -2
    assert cert.chi_surface == -1
    assert cert.k == 1
    assert cert.lo == -2 and cert.hi == 2
    assert cert.lo <= lee.s2(TREFOIL) <= cert.hi
    cert5 = mv.slice_certificate(genus1_trefoil_movie(), 5)
    assert cert5.lo == -8 and cert5.hi == 8


def test_slice_certificate_needs_unlink():
    movie = mv.Movie(TREFOIL, [mv.Move("R1+", edges=(1,))])
    with pytest.raises(NotEndingInUnlink):
        mv.slice_certificate(movie, 2)


def test_annulus_movie_forces_equality():
    """R-moves only: chi = 0 in both directions, so s2 is pinned."""
    forward = [mv.Move("R1-", edges=(2,)), mv.Move("R2", edges=(1, 4))]
    led = mv.validate_movie(mv.Movie(TREFOIL, forward))
    assert led.chi == 0
    other = led.end
    assert not other.same_diagram(TREFOIL)
    backward = [mv.Move("R2", crossings=(other.n_crossings - 2,
                                         other.n_crossings - 1)),
                mv.Move("R1-", crossings=(3,))]
    led_back = mv.validate_movie(mv.Movie(other, backward))
    assert led_back.chi == 0
    assert led_back.end.same_diagram(TREFOIL)
    assert lee.s2(TREFOIL) == lee.s2(other)


# -- files -------------------------------------------------------------------------


def test_movie_file_roundtrip(tmp_path):
    movie = genus1_trefoil_movie()
    path = tmp_path / "movie.jsonl"
    mv.save_movie(movie, path)
    loaded = mv.load_movie(path)
    assert loaded.start.same_diagram(movie.start)
    l1, l2 = mv.validate_movie(movie), mv.validate_movie(loaded)
    assert l1.chi == l2.chi and l1.end.same_diagram(l2.end)
