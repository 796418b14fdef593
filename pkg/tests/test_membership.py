import json

import numpy as np
import pytest

from qutrit_orbits import membership, sampling, su3
from qutrit_orbits.invariants import LocalInvariantPoint, casimir_arrays, local_invariant_arrays

SQRT3 = np.sqrt(3.0)


def test_maximally_mixed_is_physical_with_binding_lower_slack():
    v = membership.is_physical_bloch(np.zeros(8))
    assert v.inside
    assert v.slacks["pos1"] == pytest.approx(1.0)
    assert v.slacks["pos2_lower"] == pytest.approx(0.0, abs=1e-15)
    assert v.slacks["pos2_upper"] == pytest.approx(1 / 3)
    assert "pos2_lower" in v.binding


def test_pure_state_saturates_both_constraints():
    xi = su3.density_to_bloch(np.diag([1.0, 0.0, 0.0]))
    v = membership.is_physical_bloch(xi)
    assert v.inside
    assert v.slacks["pos1"] == pytest.approx(0.0, abs=1e-12)
    assert v.slacks["pos2_upper"] == pytest.approx(0.0, abs=1e-12)
    assert {"pos1", "pos2_upper"} <= set(v.binding)


def test_scaled_unit_vector_is_outside():
    xi = np.zeros(8)
    xi[2] = 1.1
    assert not membership.is_physical_bloch(xi).inside


def test_physicality_matches_eigenvalue_test():
    xi = sampling.uniform_bloch_cube(20000, seed=61) * 1.1
    eig = np.linalg.eigvalsh(su3.bloch_to_density(xi))
    by_eig = eig[:, 0] >= -1e-9
    for k in range(0, 20000, 371):
        assert membership.is_physical_bloch(xi[k]).inside == by_eig[k]


def test_triangle_vertices_inside_and_binding():
    for (c2, c3), expect_binding in [
        ((0.0, 0.0), {"c2_lower", "edge_lower", "disc"}),
        ((0.25, -0.125), {"edge_upper", "disc"}),
        ((1.0, 1.0), {"c2_upper", "edge_upper", "disc"}),
    ]:
        v = membership.in_global_orbit_space(c2, c3)
        assert v.inside
        assert expect_binding <= set(v.binding)


def test_global_rejects_outside_points():
    assert not membership.in_global_orbit_space(1.2, 0.0).inside
    assert not membership.in_global_orbit_space(0.5, 0.4).inside  # disc < 0
    assert not membership.in_global_orbit_space(0.5, -0.5).inside  # edge > 1


def test_local_membership_examples():
    v = membership.in_local_orbit_space(LocalInvariantPoint(0, 0, 0, 0))
    assert v.inside  # maximally mixed
    assert not membership.in_local_orbit_space((0.0, 0.0, 0.5, 0.6)).inside
    # forward inclusion on a random batch
    rho = sampling.random_density(sampling.SamplerConfig(seed=62, count=3000))
    xi = su3.density_to_bloch(rho, check=False)
    c2, c3 = casimir_arrays(xi)
    f1, f2, _, _ = local_invariant_arrays(xi)
    slacks = membership.local_membership_slack_arrays(f1, f2, c2, c3)
    assert min(s.min() for s in slacks.values()) > -1e-10


def test_mixed_state_grad_has_single_nonzero_direction():
    g = np.linalg.eigvalsh(
        np.asarray([[1.0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    )
    v = membership.in_local_orbit_space(LocalInvariantPoint(0, 0, 0, 0))
    assert v.slacks["grad_psd"] == pytest.approx(0.0, abs=1e-15)
    assert g[-1] == 1.0  # the f1 direction survives at the origin


def test_slice_zero_reproduces_triangle():
    mesh = membership.slice_mesh(0.0, 64)
    assert not mesh.empty
    d = membership.projection_hausdorff_to_triangle(mesh.projection)
    assert d <= 2.0 / 64


def test_slice_cells_pass_membership_and_have_nonempty_intervals():
    mesh = membership.slice_mesh(0.4, 32)
    assert mesh.dropped_cells == 0
    arr = np.asarray(mesh.cells)
    assert np.all(arr[:, 2] <= arr[:, 3])
    # spot-check midpoints through the public predicate
    for k in range(0, len(arr), 37):
        f2, c2, lo, hi = arr[k]
        v = membership.in_local_orbit_space(LocalInvariantPoint(0.4, f2, c2, 0.5 * (lo + hi)))
        assert v.inside


def test_slice_de_edge_lies_on_delta2():
    """At f1 = 2/5 the left edge of the projection is the Delta2 line."""
    from qutrit_orbits.gradgeom import delta2_c3

    f1 = 0.4
    mesh = membership.slice_mesh(f1, 64)
    arr = np.asarray(mesh.cells)
    # cells with f3 ~ 0 (c2 - f1^2 - f2 small) sit on the Delta2 surface:
    f3 = arr[:, 1] - f1**2 - arr[:, 0]
    h = (1.0 - f1**2) / 64
    edge = arr[f3 < 1.5 * h]
    assert len(edge) > 10
    dev = np.abs(0.5 * (edge[:, 2] + edge[:, 3]) - delta2_c3(f1, edge[:, 1]))
    assert np.max(dev) < 0.1  # interval midpoints track the line at grid resolution


def test_slice_projections_nest_into_triangle():
    tb = membership.triangle_boundary(3000)
    for f1 in (0.4, -0.4, -0.9):
        mesh = membership.slice_mesh(f1, 48)
        proj = np.asarray(mesh.projection)
        outside = ~membership.triangle_contains(proj[:, 0], proj[:, 1])
        if outside.any():
            assert membership._point_to_segments(proj[outside], tb).max() <= 2.0 / 48
        # strict: the region misses a neighbourhood of A since c2 >= f1^2
        assert proj[:, 0].min() >= f1**2 - 1.0 / 48


def test_slice_projection_shrinks_toward_pure_vertex_as_f1_goes_to_minus_one():
    mesh = membership.slice_mesh(-0.95, 32)
    proj = np.asarray(mesh.projection)
    assert proj[:, 0].min() > 0.9
    assert mesh.projection_area() < 1e-3


def test_slice_out_of_range_is_empty():
    assert membership.slice_mesh(0.9, 16).empty
    assert membership.slice_mesh(-1.5, 16).empty


def test_slice_requires_grid():
    with pytest.raises(ValueError):
        membership.slice_mesh(0.0, 1)


def test_key_points():
    pts = membership.key_points(0.4)
    assert pts["A"] == (0.0, 0.0)
    assert pts["B"] == (0.25, -0.125)
    assert pts["C"] == (1.0, 1.0)
    assert pts["D"] == (pytest.approx(0.16), pytest.approx(-0.064))
    assert pts["E"] == (pytest.approx(0.64), pytest.approx(0.512))
    # E at f1 = 1/2 covers C: the Delta2 segment runs from B to C
    pts = membership.key_points(0.5)
    assert pts["D"] == (pytest.approx(0.25), pytest.approx(-0.125))
    assert pts["E"] == (pytest.approx(1.0), pytest.approx(1.0))
    # beyond the tangency range E moves to the BC edge
    pts = membership.key_points(-0.4)
    c2e, c3e = pts["E"]
    assert 3 * c2e - 2 * c3e == pytest.approx(1.0, abs=1e-12)
    # D and E absent outside the physical f1 range
    assert set(membership.key_points(0.7)) == {"A", "B", "C"}


def test_key_points_on_discriminant_curve():
    for f1 in (0.3, 0.5, -0.2):
        pts = membership.key_points(f1)
        for name in ("D", "E"):
            c2, c3 = pts[name]
            if name == "E" and f1 < -0.25:
                continue
            assert c2**3 - c3**2 == pytest.approx(0.0, abs=1e-12)


def test_mesh_export_csv_json(tmp_path):
    mesh = membership.slice_mesh(0.4, 16)
    csv_path = tmp_path / "slice_f1=0.4.csv"
    json_path = tmp_path / "slice_f1=0.4.json"
    mesh.write_csv(csv_path)
    mesh.write_json(json_path)
    header = csv_path.read_text().splitlines()[0]
    assert header == "f2,c2,c3_lo,c3_hi"
    data = json.loads(json_path.read_text())
    assert data["f1"] == 0.4
    assert data["schema_version"] == 1
    assert len(data["cells"]) == len(mesh.cells)
    assert data["key_points"]["D"]
    assert len(data["projection"]) >= 3
