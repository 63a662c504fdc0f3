"""Heat transport: upwind advection, interface exchange, time stepping."""

import numpy as np
import pytest

from dfmsim.errors import CflViolation, MissingParameters
from dfmsim.flow import (
    BC_DIRICHLET,
    BoundaryCondition,
    FaceFluxField,
    FlowParameters,
    ensure_default_params,
    solve_incompressible,
)
from dfmsim.geometry import FractureNetwork, Segment2
from dfmsim.linalg import solve
from dfmsim.mesh import (
    MeshSizeSpec,
    MixedDimGrid,
    Rectangle,
    build_mixed_grid,
    cart_grid_2d,
    line_grid_on_segment,
)
from dfmsim.transport import (
    CRANK_NICOLSON,
    EXPLICIT_EULER,
    IMPLICIT_EULER,
    TemperatureField,
    TimeStepper,
    TransportParameters,
    assemble_transport,
    ensure_default_transport,
    grid_aperture,
    interface_advect,
    run_transport,
    step,
    step_assembled,
    transport_params,
    upwind_discretize,
)

UNIT = Rectangle(0.0, 0.0, 1.0, 1.0)


def single_grid_mdg(g):
    return MixedDimGrid({g.dim: [g]}, [])


def chain_mdg(n, length=None):
    """n-cell chain on the x-axis; unit cells unless a length is given."""
    length = float(n) if length is None else length
    g = line_grid_on_segment((0.0, 0.0), (length, 0.0), n)
    return single_grid_mdg(g), g


def axis_flux(mdg, g, speed=1.0):
    """Uniform +x velocity on a 1D chain, signed along the face normals."""
    flux = FaceFluxField(mdg)
    flux.set(g, speed * g.face_normals[:, 0])
    return flux


def dirichlet_where(g, predicate, value, bc=None):
    bc = bc if bc is not None else BoundaryCondition(g)
    bf = g.boundary_faces()
    keep = np.array([predicate(g.face_centers[f]) for f in bf], dtype=bool)
    if keep.any():
        bc.set_dirichlet(bf[keep], value)
    return bc


def crossing_mdg(h=0.25):
    net = FractureNetwork(
        [Segment2((0.1, 0.5), (0.9, 0.5)), Segment2((0.5, 0.1), (0.5, 0.9))]
    )
    return build_mixed_grid(UNIT, net, MeshSizeSpec(h_background=h))


def total_energy(ts, state):
    return float(ts.acc @ state.vector(ts.dof_map))


class TestParameters:
    def test_unit_defaults(self):
        g = cart_grid_2d(2, 2, UNIT)
        tp = TransportParameters(g)
        assert np.allclose(tp.heat_capacity_eff, 1.0)
        assert tp.heat_capacity_fluid == 1.0
        assert tp.conductivity_eff.shape == (4, 2, 2)
        assert np.allclose(tp.conductivity_eff, np.eye(2))
        assert not tp.bc.any_dirichlet

    def test_zero_conductivity_allowed(self):
        # a purely advective medium is legal, unlike zero permeability
        g = cart_grid_2d(2, 2, UNIT)
        tp = TransportParameters(g, conductivity_eff=0.0)
        assert np.allclose(tp.conductivity_eff, 0.0)

    def test_negative_conductivity_rejected(self):
        g = cart_grid_2d(2, 2, UNIT)
        with pytest.raises(ValueError):
            TransportParameters(g, conductivity_eff=-1.0)

    def test_capacities_must_be_positive(self):
        g = cart_grid_2d(2, 2, UNIT)
        with pytest.raises(ValueError):
            TransportParameters(g, heat_capacity_eff=0.0)
        with pytest.raises(ValueError):
            TransportParameters(g, heat_capacity_fluid=0.0)

    def test_missing_parameters(self):
        g = cart_grid_2d(2, 2, UNIT)
        mdg = single_grid_mdg(g)
        with pytest.raises(MissingParameters):
            transport_params(mdg, g)

    def test_aperture_follows_flow_params(self):
        g = line_grid_on_segment((0.0, 0.0), (1.0, 0.0), 4)
        mdg = single_grid_mdg(g)
        assert np.allclose(grid_aperture(mdg, g), 1.0)
        mdg.props(g)["flow"] = FlowParameters(g, aperture=1e-3)
        assert np.allclose(grid_aperture(mdg, g), 1e-3)

    def test_accumulation_scales_with_aperture(self):
        net = FractureNetwork([Segment2((0.2, 0.5), (0.8, 0.5))])
        mdg = build_mixed_grid(UNIT, net, MeshSizeSpec(h_background=0.25))
        g1 = mdg.subdomains(dim=1)[0]
        mdg.props(g1)["flow"] = FlowParameters(g1, aperture=1e-2)
        ensure_default_params(mdg)
        ensure_default_transport(mdg)
        ts = assemble_transport(mdg, FaceFluxField(mdg))
        for i, g in enumerate(mdg.subdomains()):
            a = 1e-2 if g.dim == 1 else 1.0
            expect = g.cell_volumes * a ** (2 - g.dim)
            got = ts.acc[ts.dof_map.block(i)]
            assert np.allclose(got, expect), f"dim {g.dim}: {got} vs {expect}"


class TestUpwind:
    def test_interior_face_takes_upstream_value(self):
        g = cart_grid_2d(2, 1, Rectangle(0.0, 0.0, 2.0, 1.0))
        f = int(np.flatnonzero(g.face_cells[:, 1] >= 0)[0])
        c0, c1 = g.face_cells[f]
        q = np.zeros(g.n_faces)
        q[f] = 2.0
        st = upwind_discretize(g, q)
        assert list(zip(st.rows, st.cols, st.vals)) == [(f, c0, 2.0)]
        q[f] = -2.0
        st = upwind_discretize(g, q)
        assert list(zip(st.rows, st.cols, st.vals)) == [(f, c1, -2.0)]

    def test_zero_flux_is_empty(self):
        g = cart_grid_2d(3, 3, UNIT)
        st = upwind_discretize(g, np.zeros(g.n_faces))
        assert len(st.rows) == 0
        assert not st.bound.any()

    def test_boundary_inflow_dirichlet_goes_to_bound(self):
        mdg, g = chain_mdg(2)
        flux = axis_flux(mdg, g)
        bc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 3.5)
        st = upwind_discretize(g, flux.of(g), bc=bc)
        left = int(np.flatnonzero(np.abs(g.face_centers[:, 0]) < 1e-9)[0])
        right = int(np.flatnonzero(np.abs(g.face_centers[:, 0] - 2.0) < 1e-9)[0])
        # inflow against the outward normal, so q = -1 there
        assert st.bound[left] == pytest.approx(-3.5)
        assert left not in st.rows
        # the outflow face advects the interior cell regardless of bc
        pairs = dict(zip(st.rows, zip(st.cols, st.vals)))
        assert pairs[right] == (g.face_cells[right, 0], 1.0)

    def test_boundary_inflow_without_dirichlet_uses_interior(self):
        mdg, g = chain_mdg(2)
        flux = axis_flux(mdg, g)
        st = upwind_discretize(g, flux.of(g))
        left = int(np.flatnonzero(np.abs(g.face_centers[:, 0]) < 1e-9)[0])
        pairs = dict(zip(st.rows, zip(st.cols, st.vals)))
        assert pairs[left] == (g.face_cells[left, 0], -1.0)
        assert not st.bound.any()

    def test_reversal_transposes_interior_coupling(self):
        g = cart_grid_2d(4, 3, UNIT)
        rng = np.random.default_rng(3)
        q = rng.normal(size=g.n_faces)

        def dense(stencil):
            a = np.zeros((g.n_cells, g.n_cells))
            for f, c, t in zip(stencil.rows, stencil.cols, stencil.vals):
                c0, c1 = g.face_cells[f]
                a[c0, c] += t
                if c1 >= 0:
                    a[c1, c] -= t
            return a

        fwd = dense(upwind_discretize(g, q))
        rev = dense(upwind_discretize(g, -q))
        off = ~np.eye(g.n_cells, dtype=bool)
        assert np.allclose(rev[off], fwd.T[off]), "reversal must transpose coupling"

    def test_skip_faces_are_ignored(self):
        mdg, g = chain_mdg(3)
        flux = axis_flux(mdg, g)
        interior = np.flatnonzero(g.face_cells[:, 1] >= 0)
        st = upwind_discretize(g, flux.of(g), skip_faces=set(int(f) for f in interior))
        assert not set(st.rows) & set(int(f) for f in interior)


class TestInterfaceAdvection:
    def _iface(self):
        net = FractureNetwork([Segment2((0.2, 0.5), (0.8, 0.5))])
        mdg = build_mixed_grid(UNIT, net, MeshSizeSpec(h_background=0.25))
        return mdg.interfaces[0]

    def test_upwinds_by_flux_sign(self):
        ifc = self._iface()
        n = ifc.n_pairs
        flux = np.where(np.arange(n) % 2 == 0, 2.0, -3.0)
        t_hi = 1.0 + np.arange(n, dtype=float)
        t_lo = 10.0 - np.arange(n, dtype=float)
        adv = interface_advect(ifc, flux)
        got = adv.advected(t_hi, t_lo)
        expect = [q * (th if q > 0 else tl) for q, th, tl in zip(flux, t_hi, t_lo)]
        assert np.allclose(got, expect), f"{got} vs {expect}"

    def test_sign_flip_swaps_upstream_side(self):
        ifc = self._iface()
        n = ifc.n_pairs
        rng = np.random.default_rng(11)
        flux = rng.normal(size=n)
        flux[np.abs(flux) < 1e-3] = 1.0
        t_hi = rng.normal(size=n)
        t_lo = rng.normal(size=n)
        fwd = interface_advect(ifc, flux).advected(t_hi, t_lo)
        rev = interface_advect(ifc, -flux).advected(t_hi, t_lo)
        swapped = -flux * np.where(flux > 0, t_lo, t_hi)
        assert np.allclose(rev, swapped)
        # equal temperatures make the upstream choice irrelevant
        same = interface_advect(ifc, flux).advected(t_hi, t_hi)
        assert np.allclose(same, flux * t_hi)

    def test_shape_mismatch_rejected(self):
        ifc = self._iface()
        with pytest.raises(ValueError):
            interface_advect(ifc, np.ones(ifc.n_pairs + 1))


def vertical_flow_through_fracture(h=0.25, aperture=1e-2):
    """Top-to-bottom flow across a full-width horizontal fracture."""
    net = FractureNetwork([Segment2((0.0, 0.5), (1.0, 0.5))])
    mdg = build_mixed_grid(UNIT, net, MeshSizeSpec(h_background=h))
    for g in mdg.subdomains():
        bc = dirichlet_where(g, lambda x: abs(x[1] - 1.0) < 1e-9, 1.0)
        bc = dirichlet_where(g, lambda x: abs(x[1]) < 1e-9, 0.0, bc)
        a = aperture if g.dim < 2 else 1.0
        mdg.props(g)["flow"] = FlowParameters(g, aperture=a, bc=bc)
    ensure_default_params(mdg)
    _, flux = solve_incompressible(mdg, "tpfa")
    return mdg, flux


def boundary_energy_influx(mdg, flux, state):
    """Advected energy entering through outer boundaries, unit fluid capacity."""
    skip = {id(g): set() for g in mdg.subdomains()}
    for ifc in mdg.interfaces:
        skip[id(ifc.higher)].update(int(f) for f in ifc.pairs[:, 0])
    total = 0.0
    for g in mdg.subdomains():
        tp = transport_params(mdg, g)
        q = flux.of(g)
        t = state.of(g)
        for f in g.boundary_faces():
            if int(f) in skip[id(g)] or q[f] == 0.0:
                continue
            c0 = g.face_cells[f, 0]
            if q[f] < 0 and tp.bc.kind[f] == BC_DIRICHLET:
                total -= q[f] * tp.bc.value[f]
            else:
                total -= q[f] * t[c0]
    return total


class TestStep:
    def test_uniform_state_is_fixed_point(self):
        mdg = crossing_mdg()
        for g in mdg.subdomains():
            bc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 1.0)
            bc = dirichlet_where(g, lambda x: abs(x[0] - 1.0) < 1e-9, 0.0, bc)
            a = 1e-2 if g.dim < 2 else 1.0
            mdg.props(g)["flow"] = FlowParameters(g, aperture=a, bc=bc)
        ensure_default_params(mdg)
        _, flux = solve_incompressible(mdg, "tpfa")
        for g in mdg.subdomains():
            tbc = dirichlet_where(g, lambda x: True, 1.0)
            mdg.props(g)["transport"] = TransportParameters(g, bc=tbc)
        ensure_default_transport(mdg)
        ts = assemble_transport(mdg, flux)
        state = TemperatureField(mdg)
        for g in mdg.subdomains():
            state.set(g, np.ones(g.n_cells))
        dt = 0.5 * ts.cfl_dt
        for scheme in (EXPLICIT_EULER, IMPLICIT_EULER, CRANK_NICOLSON):
            out = step_assembled(ts, TimeStepper(scheme, dt, dt), state)
            for g in mdg.subdomains():
                drift = np.abs(out.of(g) - 1.0).max()
                assert drift <= 1e-12, f"{scheme} drifted {drift} on dim {g.dim}"

    def test_one_cell_shift_at_unit_courant(self):
        # 4 unit cells keep every node coordinate exactly representable
        mdg, g = chain_mdg(4)
        flux = axis_flux(mdg, g)
        tbc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 0.0)
        mdg.props(g)["transport"] = TransportParameters(
            g, conductivity_eff=0.0, bc=tbc
        )
        state = TemperatureField(mdg).set(g, [1.0, 0.0, 0.0, 0.0])
        stepper = TimeStepper(EXPLICIT_EULER, 1.0, 1.0)
        for k in range(1, 4):
            state = step(mdg, stepper, state, flux, enforce_cfl=False)
            expect = np.zeros(4)
            expect[k] = 1.0
            assert np.array_equal(state.of(g), expect), f"step {k}: {state.of(g)}"
        state = step(mdg, stepper, state, flux, enforce_cfl=False)
        assert np.array_equal(state.of(g), np.zeros(4)), "pulse must exit"

    def test_cfl_guard(self):
        mdg, g = chain_mdg(5)
        flux = axis_flux(mdg, g)
        mdg.props(g)["transport"] = TransportParameters(g, conductivity_eff=0.0)
        ts = assemble_transport(mdg, flux)
        assert ts.cfl_dt == pytest.approx(0.9)
        state = TemperatureField(mdg)
        with pytest.raises(CflViolation):
            step_assembled(ts, TimeStepper(EXPLICIT_EULER, 1.0, 1.0), state)

    def test_crank_nicolson_is_mean_of_euler_updates(self):
        mdg, g = chain_mdg(3)
        flux = axis_flux(mdg, g)
        mdg.props(g)["transport"] = TransportParameters(g, conductivity_eff=0.5)
        ts = assemble_transport(mdg, flux)
        state = TemperatureField(mdg).set(g, [2.0, -1.0, 0.5])
        dt = 0.3 * ts.cfl_dt
        out = {
            scheme: step_assembled(ts, TimeStepper(scheme, dt, dt), state).of(g)
            for scheme in (EXPLICIT_EULER, IMPLICIT_EULER, CRANK_NICOLSON)
        }
        mean = 0.5 * (out[EXPLICIT_EULER] + out[IMPLICIT_EULER])
        gap = np.abs(out[CRANK_NICOLSON] - mean).max()
        assert gap <= 1e-12, f"averaging property violated by {gap}"

    def test_energy_balance_tracks_boundary_advection(self):
        mdg, flux = vertical_flow_through_fracture()
        for g in mdg.subdomains():
            tbc = dirichlet_where(g, lambda x: abs(x[1] - 1.0) < 1e-9, 1.0)
            mdg.props(g)["transport"] = TransportParameters(
                g, conductivity_eff=0.0, bc=tbc
            )
        ensure_default_transport(mdg)
        ts = assemble_transport(mdg, flux)
        state = TemperatureField(mdg)
        dt = 0.5 * ts.cfl_dt
        stepper = TimeStepper(EXPLICIT_EULER, dt, dt)
        for _ in range(3):
            e_old = total_energy(ts, state)
            influx = boundary_energy_influx(mdg, flux, state)
            state = step_assembled(ts, stepper, state)
            gained = total_energy(ts, state) - e_old
            assert abs(gained - dt * influx) <= 1e-10, (
                f"energy gain {gained} vs boundary supply {dt * influx}"
            )

    def test_closed_system_conserves_energy(self):
        mdg = crossing_mdg()
        rng = np.random.default_rng(7)
        for g in mdg.subdomains():
            mdg.props(g)["transport"] = TransportParameters(g)
        ensure_default_transport(mdg)
        ts = assemble_transport(mdg, FaceFluxField(mdg))
        state = TemperatureField(mdg)
        for g in mdg.subdomains():
            state.set(g, rng.uniform(0.0, 2.0, g.n_cells))
        e0 = total_energy(ts, state)
        stepper = TimeStepper(IMPLICIT_EULER, 0.05, 0.05)
        for k in range(1, 21):
            state = step_assembled(ts, stepper, state)
            e = total_energy(ts, state)
            assert abs(e - e0) <= k * 1e-12 * abs(e0), f"step {k}: {e} vs {e0}"
        # conduction must still have done something
        spread = max(np.ptp(state.of(g)) for g in mdg.subdomains())
        assert spread < 1.9, "temperatures should contract toward the mean"

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_max_principle_on_fractured_flow(self, seed):
        mdg = crossing_mdg(h=0.2)
        for g in mdg.subdomains():
            bc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 1.0)
            bc = dirichlet_where(g, lambda x: abs(x[0] - 1.0) < 1e-9, 0.0, bc)
            a = 1e-2 if g.dim < 2 else 1.0
            mdg.props(g)["flow"] = FlowParameters(g, aperture=a, bc=bc)
        ensure_default_params(mdg)
        _, flux = solve_incompressible(mdg, "tpfa")
        rng = np.random.default_rng(seed)
        for g in mdg.subdomains():
            tbc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 0.3)
            mdg.props(g)["transport"] = TransportParameters(
                g, conductivity_eff=0.1, bc=tbc
            )
        ensure_default_transport(mdg)
        ts = assemble_transport(mdg, flux)
        state = TemperatureField(mdg)
        for g in mdg.subdomains():
            state.set(g, rng.uniform(0.0, 1.0, g.n_cells))
        lo = min(0.3, min(state.of(g).min() for g in mdg.subdomains()))
        hi = max(0.3, max(state.of(g).max() for g in mdg.subdomains()))
        stepper = TimeStepper(EXPLICIT_EULER, ts.cfl_dt, ts.cfl_dt)
        for k in range(15):
            state = step_assembled(ts, stepper, state)
            for g in mdg.subdomains():
                t = state.of(g)
                assert t.min() >= lo - 1e-12, f"undershoot {t.min()} at step {k}"
                assert t.max() <= hi + 1e-12, f"overshoot {t.max()} at step {k}"

    def test_missing_transport_params_raise(self):
        mdg = crossing_mdg()
        with pytest.raises(MissingParameters):
            assemble_transport(mdg, FaceFluxField(mdg))


class TestTimeStepper:
    def test_validation(self):
        with pytest.raises(ValueError):
            TimeStepper("leapfrog", 0.1, 1.0)
        with pytest.raises(ValueError):
            TimeStepper(EXPLICIT_EULER, 0.0, 1.0)
        with pytest.raises(ValueError):
            TimeStepper(EXPLICIT_EULER, 0.2, 0.1)

    def test_step_count(self):
        assert TimeStepper(IMPLICIT_EULER, 0.1, 1.0).n_steps == 10
        assert TimeStepper(IMPLICIT_EULER, 0.3, 1.0).n_steps == 4
        assert TimeStepper(IMPLICIT_EULER, 1.0, 1.0).n_steps == 1


class TestRunTransport:
    def _strip(self):
        g = cart_grid_2d(8, 1, UNIT)
        mdg = single_grid_mdg(g)
        tbc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 1.0)
        tbc = dirichlet_where(g, lambda x: abs(x[0] - 1.0) < 1e-9, 0.0, tbc)
        mdg.props(g)["transport"] = TransportParameters(g, bc=tbc)
        return mdg, g

    def test_conduction_relaxes_to_linear_profile(self):
        mdg, g = self._strip()
        stepper = TimeStepper(IMPLICIT_EULER, 1.0, 20.0)
        series = run_transport(mdg, stepper, FaceFluxField(mdg))
        t_final, state = series[-1]
        assert t_final == pytest.approx(20.0)
        expect = 1.0 - g.cell_centers[:, 0]
        err = np.abs(state.of(g) - expect).max()
        assert err <= 1e-10, f"steady profile off by {err}"

    def test_explicit_implicit_agree_to_first_order(self):
        diffs = []
        for dt in (0.005, 0.0025):
            finals = {}
            for scheme in (EXPLICIT_EULER, IMPLICIT_EULER):
                mdg, g = chain_mdg(8, length=1.0)
                mdg.props(g)["transport"] = TransportParameters(g)
                state0 = TemperatureField(mdg).set(g, g.cell_centers[:, 0])
                series = run_transport(
                    mdg, TimeStepper(scheme, dt, 0.05), FaceFluxField(mdg), state0
                )
                finals[scheme] = series[-1][1].of(g)
            diffs.append(
                np.abs(finals[EXPLICIT_EULER] - finals[IMPLICIT_EULER]).max()
            )
        assert diffs[1] > 1e-14, "schemes should not collapse onto each other"
        ratio = diffs[0] / diffs[1]
        assert ratio >= 1.5, f"halving dt should halve the gap, got {ratio}"

    def test_series_emission(self):
        mdg, g = self._strip()
        seen = []
        stepper = TimeStepper(IMPLICIT_EULER, 0.1, 0.5)
        series = run_transport(
            mdg,
            stepper,
            FaceFluxField(mdg),
            output_every=2,
            on_state=lambda t, s: seen.append(t),
        )
        times = [t for t, _ in series]
        assert times == pytest.approx([0.0, 0.2, 0.4, 0.5])
        assert seen == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
        # snapshots are decoupled from the marching state
        assert series[0][1] is not series[-1][1]


class TestPecletProfile:
    def _steady_error(self, n, peclet=8.0):
        mdg, g = chain_mdg(n, length=1.0)
        flux = axis_flux(mdg, g, speed=peclet)
        tbc = dirichlet_where(g, lambda x: abs(x[0]) < 1e-9, 0.0)
        tbc = dirichlet_where(g, lambda x: abs(x[0] - 1.0) < 1e-9, 1.0, tbc)
        mdg.props(g)["transport"] = TransportParameters(g, bc=tbc)
        ts = assemble_transport(mdg, flux)
        t = solve(ts.system, hint="upwind")
        x = g.cell_centers[:, 0]
        exact = np.expm1(peclet * x) / np.expm1(peclet)
        return np.abs(t - exact).max()

    def test_boundary_layer_first_order(self):
        # coarser levels are still pre-asymptotic inside the outflow layer
        errs = [self._steady_error(n) for n in (64, 128, 256)]
        rates = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(rates) >= 0.9, f"errors {errs}, rates {rates}"
