import csv
import json

import numpy as np
import pytest

from iwaops.exterior import norm, parse_form
from iwaops.ops import J1, PK_PERP, is_j1_invariant, mn_type, rho_projection
from iwaops.scanner import (
    FamilySpec,
    MomentPoint,
    VARIANTS,
    analyze_point,
    expected_superset,
    family_data,
    generate,
    moment_map,
    sweep,
    verify_moment_images,
    write_moment_csv,
)
from iwaops.serialize import canonical_json


class TestFamilies:
    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            FamilySpec("nonsense", count=10)

    def test_determinism(self):
        a = generate(FamilySpec("generic", count=20, seed=9))
        b = generate(FamilySpec("generic", count=20, seed=9))
        for p, q in zip(a, b):
            assert np.allclose(p.v1, q.v1) and np.allclose(p.v2, q.v2)

    def test_points_independent_of_count(self):
        # per-point RNG comes from (seed, index): prefixes agree
        a = generate(FamilySpec("vslice", count=10, seed=4))
        b = generate(FamilySpec("vslice", count=30, seed=4))
        for p, q in zip(a, b):
            assert np.allclose(p.v1, q.v1)

    def test_standard_vertical_orientations(self):
        pts = generate(FamilySpec("standard-vertical", count=4))
        assert norm(pts[0].plucker - parse_form("e56")) < 1e-12
        assert norm(pts[1].plucker - parse_form("-1 e56")) < 1e-12
        assert norm(pts[2].plucker - pts[0].plucker) < 1e-12

    def test_horizontal_family_constraint(self):
        for p in generate(FamilySpec("horizontal-gr2k", count=100, seed=1)):
            assert mn_type(p) == (2, 0)
            assert np.linalg.norm(PK_PERP @ p.v1) == 0.0

    def test_geodesic_family_constraint(self):
        for p in generate(
            FamilySpec("geodesic-spheres", count=100, seed=1, params={"sign": 1})
        ):
            assert is_j1_invariant(p)
            assert np.allclose(p.v2, J1 @ p.v1, atol=1e-12)

    def test_type11_family_constraint(self):
        for p in generate(FamilySpec("type11", count=100, seed=1)):
            assert mn_type(p) == (1, 1)

    def test_vslice_family_constraint(self):
        for p in generate(FamilySpec("vslice", count=200, seed=1)):
            assert np.hypot(*rho_projection(p)) < 1e-9

    def test_angle_grid_hits_boundaries(self):
        # grid angles include 0 and pi/2, so e5 and e6 show up exactly
        seen_axis = False
        for p in generate(FamilySpec("type11", count=50, seed=3)):
            if abs(abs(p.v2[4]) - 1.0) < 1e-15 or abs(abs(p.v2[5]) - 1.0) < 1e-15:
                seen_axis = True
        assert seen_axis


class TestMomentMap:
    @pytest.mark.parametrize(
        "lit,expected",
        [
            ("e12", (1.0, 0.0, 0.0)),
            ("e34", (0.0, 1.0, 0.0)),
            ("e56", (0.0, 0.0, 1.0)),
            ("-1 e56", (0.0, 0.0, -1.0)),
            ("e15", (0.0, 0.0, 0.0)),
        ],
    )
    def test_vertices(self, lit, expected):
        from iwaops.ops import from_plucker

        m = moment_map(from_plucker(parse_form(lit)))
        assert np.allclose(m, expected, atol=1e-12)

    def test_gauge_invariance(self):
        from iwaops.ops import from_vectors, sample_uniform

        rng = np.random.default_rng(33)
        p = sample_uniform(rng)
        m0 = moment_map(p)
        for _ in range(5):
            t = rng.uniform(0, 2 * np.pi)
            q = from_vectors(
                np.cos(t) * p.v1 + np.sin(t) * p.v2,
                -np.sin(t) * p.v1 + np.cos(t) * p.v2,
            )
            assert np.allclose(moment_map(q), m0, atol=1e-12)


class TestSweep:
    def test_standard_vertical_histogram(self, connection_f):
        rep = sweep(FamilySpec("standard-vertical", count=2), connection_f)
        assert rep.histogram == {"W4plus": 2}
        assert rep.violations == []

    @pytest.mark.parametrize(
        "variant", ["geodesic-spheres", "horizontal-gr2k", "vslice"]
    )
    def test_published_rows_hold(self, connection_f, variant):
        rep = sweep(FamilySpec(variant, count=120, seed=5), connection_f)
        assert rep.violations == []

    def test_type11_published_row_fails_traceless_block(self, connection_f):
        # every member lands in W2 (+ W4 + W5); the published row books W3,
        # whose trace vanishes identically on vertical foliations
        rep = sweep(FamilySpec("type11", count=60, seed=5), connection_f)
        assert len(rep.violations) == 60
        rep2 = sweep(
            FamilySpec("type11", count=60, seed=5),
            connection_f,
            table="corrected_supersets",
        )
        assert rep2.violations == []

    def test_observed_unions_match_fixture(self, connection_f):
        unions = family_data()["observed_unions"]
        for variant, expected in unions.items():
            rep = sweep(
                FamilySpec(variant, count=200, seed=5),
                connection_f,
                table="corrected_supersets",
            )
            assert rep.observed_union() == frozenset(expected)

    def test_label_inclusion_chain(self, connection_f):
        # geodesic spheres sit inside both larger families' label sets
        gs = sweep(FamilySpec("geodesic-spheres", count=50, seed=5), connection_f)
        hk = sweep(FamilySpec("horizontal-gr2k", count=50, seed=5), connection_f)
        vs = sweep(
            FamilySpec("vslice", count=200, seed=5),
            connection_f,
            table="corrected_supersets",
        )
        assert gs.observed_union() <= hk.observed_union()
        assert gs.observed_union() <= vs.observed_union()

    def test_threads_do_not_change_results(self, connection_f):
        a = sweep(FamilySpec("vslice", count=40, seed=6), connection_f, threads=1)
        b = sweep(FamilySpec("vslice", count=40, seed=6), connection_f, threads=4)
        assert a.histogram == b.histogram
        assert [tuple(m) for m in a.moment_cloud] == [tuple(m) for m in b.moment_cloud]

    def test_report_json_serializable(self, connection_f):
        rep = sweep(FamilySpec("generic", count=10, seed=7), connection_f)
        text = canonical_json(rep.to_json())
        parsed = json.loads(text)
        assert sum(parsed["histogram"].values()) == 10
        assert len(parsed["moment_cloud"]) == 10


class TestMomentReport:
    def test_all_checks_pass(self, connection_f):
        counts = {
            "geodesic-spheres": 100,
            "horizontal-gr2k": 100,
            "type11": 100,
            "vslice": 200,
            "uniform": 1000,
        }
        report = verify_moment_images(connection_f, counts=counts)
        assert report.passed, report.to_json()

    def test_geodesic_segment_parametrization(self, connection_f):
        # on the + sphere the image is exactly {(t, 1-t, 0)}
        for p in generate(
            FamilySpec("geodesic-spheres", count=50, seed=2, params={"sign": 1})
        ):
            m = moment_map(p)
            assert abs(m.x + m.y - 1.0) < 1e-12
            assert m.x >= -1e-12 and m.y >= -1e-12 and abs(m.z) < 1e-12


class TestCsv:
    def test_write_and_parse(self, tmp_path, connection_f):
        results = [
            analyze_point(p, connection_f, 1e-7, i)
            for i, p in enumerate(generate(FamilySpec("type11", count=5, seed=0)))
        ]
        path = tmp_path / "cloud.csv"
        n = write_moment_csv(path, results)
        assert n == 5
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y", "z", "signature", "rank"]
        assert len(rows) == 6
        for row in rows[1:]:
            assert abs(float(row[0])) < 1e-11
            assert row[3] == "W2+W4minus+W4plus+W5"
            assert row[4] == "5"


def test_expected_superset_tables():
    for variant in VARIANTS:
        assert expected_superset(variant) <= frozenset(
            ["W1", "W2", "W3", "W4plus", "W4minus", "W5", "W6"]
        )
    assert "W3" in expected_superset("type11")
    assert "W2" in expected_superset("type11", "corrected_supersets")
