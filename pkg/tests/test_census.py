import pytest

from schurrec.algebras import point_algebra
from schurrec.census import (
    all_bricks,
    all_left_schur,
    all_monobricks,
    all_torf,
    all_wide,
    fuzz_exactness_sweep,
    fuzz_theorem_sweep,
    random_triangular_instance,
    reproduce_table1,
)
from schurrec.modules import build_universe
from schurrec.subcats import verify_bijection
from conftest import a2_algebra, a3_algebra
import random


@pytest.fixture(scope="module")
def u2():
    return build_universe(a2_algebra(), 2)


@pytest.fixture(scope="module")
def u3():
    return build_universe(a3_algebra(), 3)


def test_bricks_a2_a3(u2, u3):
    assert len(all_bricks(u2).ids) == 3
    assert len(all_bricks(u3).ids) == 6


def test_brick_point():
    u = build_universe(point_algebra(5), 2)
    assert len(all_bricks(u).ids) == 1


def test_monobrick_counts_a2(u2):
    res = all_monobricks(u2)
    assert res.counts == {
        "bricks": 3, "monobricks": 6, "semibricks": 5, "cc_monobricks": 5,
    }


def test_monobrick_counts_point():
    u = build_universe(point_algebra(2), 2)
    res = all_monobricks(u)
    assert res.counts["monobricks"] == 2  # the empty set and the simple


def test_monobrick_counts_a3(u3):
    res = all_monobricks(u3)
    assert res.counts["monobricks"] == 22
    assert res.counts["semibricks"] == 14
    assert res.counts["cc_monobricks"] == 14


def test_left_schur_counts_a2(u2):
    res = all_left_schur(u2)
    assert res.oracle_ran
    assert res.counts == {"left_schur": 6, "wide": 5, "torsion_free": 5,
                          "non_representable_monobricks": 0}


def test_left_schur_counts_point():
    u = build_universe(point_algebra(3), 2)
    res = all_left_schur(u)
    assert res.counts["left_schur"] == 2  # {0} and the whole category


def test_left_schur_counts_a3(u3):
    res = all_left_schur(u3)
    assert res.oracle_ran
    assert res.counts["left_schur"] == 22
    assert res.counts["wide"] == 14
    assert res.counts["torsion_free"] == 14


def test_wide_torf_censuses_cross_checked(u2):
    assert all_wide(u2).counts["wide"] == 5
    assert all_torf(u2).counts["torf"] == 5


def test_counting_inequalities(u2, u3):
    for u in (u2, u3):
        res = all_monobricks(u)
        assert res.counts["semibricks"] <= res.counts["monobricks"]
        assert res.counts["cc_monobricks"] <= res.counts["monobricks"]


def test_bijection_report_a2(u2):
    report = verify_bijection(u2)
    assert report["ok"], report["counterexamples"]
    assert report["counts"]["monobricks"] == 6
    assert report["counts"]["wide"] == report["counts"]["semibricks"] == 5
    assert report["counts"]["torsion_free"] == report["counts"]["cc_monobricks"] == 5


def test_bijection_report_a3(u3):
    report = verify_bijection(u3)
    assert report["ok"], report["counterexamples"]
    assert report["counts"]["left_schur"] == report["counts"]["monobricks"] == 22


def test_table_reproduction():
    report = reproduce_table1(p=2)
    assert report["ok"], report["failures"]
    assert report["triangular_matches_quiver"]
    assert len(report["rows"]) == 12
    assert sum(1 for row in report["rows"] if not row["torsion_free"]) == 2
    assert sum(1 for row in report["rows"] if not row["wide"]) == 2
    # the two non-torf rows share the non-cofinally-closed B side {2/3}
    for row in report["rows"]:
        assert row["torsion_free"] == row["b_cofinally_closed"]
        assert row["wide"] == row["b_semibrick"]


def test_random_instances_are_valid_algebras():
    rng = random.Random(42)
    for _ in range(10):
        alg, data = random_triangular_instance(rng)
        assert alg.dim >= 1
        assert set(data.e.vertices) <= set(range(alg.nv))


def test_fuzz_exactness_smoke():
    report = fuzz_exactness_sweep(8, seed=1234)
    assert report["ok"], [e for e in report["instances"] if not e.get("ok", True)]
    assert report["checked"] >= 4


def test_fuzz_theorem_smoke():
    report = fuzz_theorem_sweep(4, seed=99, laws=("3.4",))
    assert report["ok"]
    assert report["checked"] >= 2
