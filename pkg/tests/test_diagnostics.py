import numpy as np
import pytest

from gqms import diagnostics, fock, generator
from gqms import model as gm
from helpers import strictly_positive_model


def heated_mode_setup(N_max=8):
    model = gm.quadratic_free_model(1, V=[[1.0], [0.0]], U=[[0.0], [1.0]])
    space = fock.build_space(1, N_max)
    ops = generator.build_operators(model, space)
    K = gm.build_kossakowski(model.V, model.U)
    return model, space, ops, K


def test_number_bound_equality_case():
    # K = I makes -2 G0 = 2N + 1 exactly, so the slack vanishes sample by sample
    model, space, ops, K = heated_mode_setup()
    rep = diagnostics.number_operator_bound(ops, K, 200, seed=1)
    assert rep.violations == 0
    assert abs(rep.min_slack) <= 1e-12
    assert rep.witness is None


def test_number_bound_vacuum_slack():
    rng = np.random.default_rng(41)
    model = strictly_positive_model(rng, 2)
    space = fock.build_space(2, 5)
    ops = generator.build_operators(model, space)
    K = gm.build_kossakowski(model.V, model.U)
    vac = space.vacuum()
    lhs = float(np.real(np.vdot(vac, -2.0 * (ops.G0 @ vac))))
    rhs = K.eps0 * float(np.real(np.vdot(vac, 2.0 * (ops.N @ vac) + 2 * vac)))
    assert lhs - rhs >= -1e-12


def test_number_bound_seeded_models():
    rng = np.random.default_rng(42)
    for _ in range(5):
        d = int(rng.integers(1, 3))
        model = strictly_positive_model(rng, d)
        space = fock.build_space(d, 7 if d == 1 else 5)
        ops = generator.build_operators(model, space)
        K = gm.build_kossakowski(model.V, model.U)
        rep = diagnostics.number_operator_bound(ops, K, 200, seed=7)
        assert rep.violations == 0


def test_number_bound_boundary_sampling_violates():
    # with margin 0 the samples reach the top grade, where the truncated
    # creation operator breaks the bound: the violation machinery must
    # report it (this is exactly why interior sampling is required)
    model = gm.quadratic_free_model(1, V=[[1.0], [0.0]], U=[[0.0], [1.0]])
    space = fock.build_space(1, 1, interior_margin=0)
    ops = generator.build_operators(model, space)
    K = gm.build_kossakowski(model.V, model.U)
    rep = diagnostics.number_operator_bound(ops, K, 50, seed=40)
    assert rep.violations > 0
    assert rep.min_slack < -1e-10
    assert rep.witness is not None


def test_domain_comparison_identity_case():
    model, space, ops, K = heated_mode_setup()
    rep = diagnostics.domain_comparison_constants(ops, K, 200, seed=2,
                                                  c_grid=[0.0, 1.0, 4.0])
    assert rep.feasible
    assert rep.c0_hat == 0.0
    assert rep.max_required_c0 <= 0.0


def test_domain_comparison_two_boson():
    params = gm.TwoBosonParams(
        gamma_minus=np.eye(2), gamma_plus=np.eye(2),
        Omega=0.2 * np.eye(2))
    model = gm.two_boson_model(params)
    space = fock.build_space(2, 6)
    ops = generator.build_operators(model, space)
    K = gm.build_kossakowski(model.V, model.U)
    rep = diagnostics.domain_comparison_constants(ops, K, 300, seed=3)
    assert rep.feasible
    assert np.isfinite(rep.max_required_c)


def test_probe_two_boson_full_rank():
    params = gm.TwoBosonParams(
        gamma_minus=np.eye(2), gamma_plus=np.eye(2), Omega=np.zeros((2, 2)))
    model = gm.two_boson_model(params)
    space = fock.build_space(2, 6)
    ops = generator.build_operators(model, space)
    lind = generator.build_lindbladian(ops, "schrodinger")
    reports = diagnostics.positivity_improving_probe(
        lind, [space.vacuum()], [0.1], space)
    assert reports[0].full
    assert reports[0].min_interior_eig > 0


def test_probe_damping_vacuum_stays_rank_one():
    model = gm.quadratic_free_model(1, V=[[1.0]], U=[[0.0]])
    space = fock.build_space(1, 8)
    ops = generator.build_operators(model, space)
    lind = generator.build_lindbladian(ops, "schrodinger")
    reports = diagnostics.positivity_improving_probe(
        lind, [space.vacuum()], [0.05, 0.1, 0.5, 1.0], space)
    assert all(r.rank == 1 for r in reports)
    assert not any(r.full for r in reports)


def test_probe_at_time_zero_is_rank_one():
    model, space, ops, K = heated_mode_setup()
    lind = generator.build_lindbladian(ops, "schrodinger")
    reports = diagnostics.positivity_improving_probe(
        lind, [space.vacuum()], [0.0], space)
    assert reports[0].rank == 1


def test_invariant_search_full_closure():
    model, space, ops, K = heated_mode_setup()
    rep = diagnostics.invariant_subspace_search(ops, 3, seed=4)
    assert rep.full_closure
    assert rep.min_closure_dim == space.interior_dim()
    assert rep.reducible_witness is None


def test_invariant_search_damping_vacuum_witness():
    model = gm.quadratic_free_model(1, V=[[1.0]], U=[[0.0]])
    space = fock.build_space(1, 8)
    ops = generator.build_operators(model, space)
    rep = diagnostics.invariant_subspace_search(
        ops, 0, seed=5, starts=[space.vacuum()])
    assert rep.min_closure_dim == 1
    assert not rep.full_closure
    assert rep.reducible_witness is not None
    witness = rep.reducible_witness[:, 0]
    assert abs(abs(np.vdot(witness, space.vacuum())) - 1.0) <= 1e-10


def test_invariant_search_trivial_two_level_space():
    model = gm.quadratic_free_model(1, V=[[1.0], [0.0]], U=[[0.0], [1.0]])
    space = fock.build_space(1, 1, interior_margin=0)
    ops = generator.build_operators(model, space)
    rep = diagnostics.invariant_subspace_search(
        ops, 0, seed=6, starts=[space.vacuum()])
    assert rep.min_closure_dim == 2


def test_sector_estimate_self_adjoint():
    model, space, ops, K = heated_mode_setup()
    # Omega = 0 so G = G0 is self-adjoint: degenerate sector
    rep = diagnostics.sector_estimate(ops, 200, seed=7, shift_grid=[0.0])
    assert rep.theta_hat <= 1e-6


def test_sector_estimate_rotating_mode():
    omega = 0.7
    model = gm.GaussianModel(d=1, Omega=[[omega]], kappa=[[0.0]], zeta=[0.0],
                             V=[[1.0]], U=[[0.0]])
    space = fock.build_space(1, 8)
    ops = generator.build_operators(model, space)
    rep = diagnostics.sector_estimate(ops, 200, seed=8, shift_grid=[0.0])
    assert rep.theta_hat == pytest.approx(np.arctan(2 * omega), abs=1e-10)
    assert rep.z_samples.shape == (200,)


def test_sector_estimate_shift_grid_selection():
    model, space, ops, K = heated_mode_setup()
    rep = diagnostics.sector_estimate(ops, 100, seed=9,
                                      shift_grid=[0.0, 1.0])
    assert rep.shift in (0.0, 1.0)
    assert len(rep.per_shift) == 2

    default = diagnostics.sector_estimate(ops, 50, seed=9)
    assert len(default.per_shift) == 4
    assert default.theta_hat <= min(th for _, th in default.per_shift) + 1e-15


def test_minimal_kossakowski_eig():
    assert diagnostics.minimal_kossakowski_eig(np.eye(4)) == pytest.approx(1.0)
    assert diagnostics.minimal_kossakowski_eig(
        np.ones((2, 2))) == pytest.approx(0.0, abs=1e-12)
    gamma_m = np.diag([2.0, 0.5])
    gamma_p = np.diag([3.0, 1.5])
    block = np.block([
        [gamma_m, np.zeros((2, 2))],
        [np.zeros((2, 2)), gamma_p],
    ])
    assert diagnostics.minimal_kossakowski_eig(block) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        diagnostics.minimal_kossakowski_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_random_interior_vector_support():
    space = fock.build_space(2, 5)
    rng = np.random.default_rng(10)
    v = diagnostics.random_interior_vector(space, rng)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    fock.check_interior(space, v)
