from dataclasses import replace

import numpy as np
import pytest

from maninlab.fan import (
    MaximalCone,
    build_sigma_n,
    check_fan,
    gale_dual_cones,
    sigma_rays,
)
from maninlab.lattice import _dot


def test_build_counts_n3():
    fan = build_sigma_n(3)
    assert len(fan.rays) == 7
    assert len(fan.maximal) == 10  # 1 + 3 + 3*2


def test_build_counts_n4():
    fan = build_sigma_n(4)
    assert len(fan.rays) == 9
    assert len(fan.maximal) == 17  # 1 + 4 + 4*3


def test_ray_set_relations():
    vectors, labels = sigma_rays(3)
    h = vectors[0]
    f = vectors[1:4]
    g = vectors[4:]
    assert h == tuple(-sum(col) for col in zip(*g))
    for i in range(3):
        assert f[i] == tuple(a + b for a, b in zip(h, g[i]))
    assert labels == ["s0", "s1", "s2", "s3", "t1", "t2", "t3"]


def test_n_below_three_rejected():
    with pytest.raises(ValueError):
        build_sigma_n(2)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_all_certificates(n):
    rep = check_fan(build_sigma_n(n))
    for flag in ("simplicial", "smooth", "complete", "separated", "projective"):
        assert rep[flag] is True, (n, flag, rep["failures"])


def test_forbidden_mixed_subdivision_breaks_separation():
    fan = build_sigma_n(3)
    F = lambda i: i
    G = lambda i: 3 + i
    bad = []
    for mc in fan.maximal:
        if mc.name == "S_1_1":
            bad.append(MaximalCone("S_1_1bad", (F(2), G(2), G(3)), ("s2", "t2", "t3")))
        elif mc.name == "S_1_2":
            bad.append(MaximalCone("S_1_2bad", (F(3), G(3), G(2)), ("s3", "t3", "t2")))
        else:
            bad.append(mc)
    rep = check_fan(replace(fan, maximal=tuple(bad)))
    assert rep["separated"] is False


def test_separator_families_match_the_case_split():
    rep = check_fan(build_sigma_n(3))
    fams = set(rep["separator_families"])
    assert any(f.startswith("x_") and f.endswith("= 0") for f in fams)
    assert any("= x_" in f for f in fams)
    assert any(f.startswith("sum_") for f in fams)
    assert "other" not in fams


def test_samples_in_unique_cone_follow_min_coordinate_classification():
    # sampled vectors landing in exactly one maximal cone sit where the
    # min-coordinate case split says they should
    fan = build_sigma_n(3)
    rng = np.random.default_rng(5)
    samples = rng.integers(-50, 51, size=(400, 3))
    adjs = {mc.name: np.array(fan.adjugate(mc)[0]) for mc in fan.maximal}
    for x in samples:
        owners = [name for name, adj in adjs.items() if (adj @ x >= 0).all()]
        if len(owners) != 1:
            continue
        name = owners[0]
        i = int(np.argmin(x))
        if x[i] >= 0:
            assert name == "C"
        elif sum(x) - x[i] <= (3 - 2) * x[i]:
            assert name == f"C_{i+1}"
        else:
            assert name.startswith("S_") and name.split("_")[1] == str(i + 1)


def test_user_fan_generic_path():
    # the fan of the projective plane: complete, smooth, separated; the
    # projectivity certificate only exists for the built-in family
    from maninlab.fan import Fan

    rays = ((1, 0), (0, 1), (-1, -1))
    maximal = (
        MaximalCone("s01", (0, 1), ("a", "b")),
        MaximalCone("s12", (1, 2), ("b", "c")),
        MaximalCone("s02", (0, 2), ("a", "c")),
    )
    fan = Fan(rank=2, rays=rays, ray_labels=("a", "b", "c"), maximal=maximal)
    rep = check_fan(fan)
    assert rep["simplicial"] and rep["smooth"] and rep["complete"] and rep["separated"]
    assert rep["projective"] is None
    # dropping a cone breaks the facet pairing
    fan2 = Fan(rank=2, rays=rays, ray_labels=("a", "b", "c"), maximal=maximal[:2])
    rep2 = check_fan(fan2)
    assert rep2["complete"] is False


def test_gale_duals_and_witness():
    duals, witness = gale_dual_cones(3)
    assert witness == (108, 74, 73, 72)
    assert len(duals) == 10
    assert all(d["witness_in_relint"] for d in duals)
    # the dual of C is the coordinate cone: its relative interior is the
    # all-positive orthant
    dual_c = next(d for d in duals if d["of_cone"] == "C")
    assert sorted(dual_c["generators"]) == sorted(
        [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    normals = dual_c["facet_normals"]
    assert sorted(normals) == sorted(
        [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])


def test_boundary_point_fails_some_strict_inequality():
    duals, _ = gale_dual_cones(3)
    y = (108, 73, 73, 72)  # y_1 = y_2
    strict_everywhere = all(
        all(_dot(row, y) > 0 for row in d["facet_normals"]) for d in duals)
    assert not strict_everywhere


def test_witness_scaled_spec_example():
    # (3, 2+2e, 2+e, 2) scaled by 36 = 4 n^2
    duals, witness = gale_dual_cones(3)
    assert witness == (3 * 36, 2 * 36 + 2, 2 * 36 + 1, 2 * 36)
