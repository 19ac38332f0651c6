# tests/test_evolution.py
"""
evolution 패키지 테스트 (보존량, 분할 스텝, evolve)
"""
import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.special import erfc

from common.errors import NumericalError, UsageError
from engine.spectral import Field, forward_transform, j_multiplier, l2_norm, linear_propagate, make_grid
from evolution import Diagnostics, energy, evolve, mass, nonlinear_step, strang_step, trajectory
from generator.data import gaussian, nls_soliton
from schemas.config import RunConfig
from tests.conftest import slow


def _run_config(**overrides):
    base = {
        "n": 256,
        "L": 40.0,
        "eps": 0.5,
        "dt": 1e-3,
        "t_final": 0.1,
        "datum": {"kind": "gaussian", "amp": 1.0, "width": 1.0, "center": 0.0},
    }
    base.update(overrides)
    return RunConfig.model_validate(base)


def _energy_drift(grid, eps, dt, T):
    u0 = gaussian(grid)
    e0 = energy(u0, eps)
    worst = 0.0
    for _, _, u in trajectory(u0, eps, dt, int(round(T / dt)), 10):
        worst = max(worst, abs(energy(Field.physical(grid, u), eps) - e0))
    return worst / abs(e0)


def _final(u0, eps, dt, T):
    u = u0.values
    for _, _, u in trajectory(u0, eps, dt, int(round(T / abs(dt))), 10**9):
        pass
    return Field.physical(u0.grid, u)


def _gaussian_energy(eps, half_width=20.0):
    """u = e^{-x²/2} 의 에너지. J_ε(e^{-x²}) 는 erfc 닫힌 형태, 퍼텐셜 항은 Simpson"""
    x = np.linspace(-half_width, half_width, 8 * 256 + 1)
    rho = np.exp(-(x**2))
    c = 1.0 / (2.0 * eps)
    j_rho = (
        (0.5 / eps)
        * (0.5 * np.sqrt(np.pi))
        * np.exp(c**2)
        * (np.exp(-x / eps) * erfc(c - x) + np.exp(x / eps) * erfc(x + c))
    )
    kinetic = 0.5 * eps**2 * 0.75 * np.sqrt(np.pi) + 0.25 * np.sqrt(np.pi)
    return kinetic - 0.25 * simpson(j_rho * rho, x=x)


class TestConservedQuantities:
    """질량과 에너지"""

    def test_zero_field(self, grid):
        z = Field.zeros(grid)
        assert mass(z) == 0.0
        assert energy(z, 0.5) == 0.0

    def test_gaussian_mass(self, grid):
        assert mass(gaussian(grid)) == pytest.approx(np.sqrt(np.pi), rel=1e-12)

    def test_energy_of_nls_soliton(self, grid):
        """ε = 0, √2 sech x: E = ½∫u'² - ¼∫u⁴ = 2/3 - 4/3 = -2/3"""
        assert energy(nls_soliton(grid, 1.0), 0.0) == pytest.approx(-2.0 / 3.0, rel=1e-7)

    @pytest.mark.parametrize("eps", [0.0, 0.25, 1.0])
    def test_mass_conserved(self, grid, eps):
        u0 = gaussian(grid)
        m0 = mass(u0)
        u = u0.values
        for _, _, u in trajectory(u0, eps, 1e-3, 200, 50):
            pass
        assert abs(mass(Field.physical(grid, u)) - m0) / m0 <= 1e-10

    def test_gaussian_energy_closed_form(self, grid):
        assert energy(gaussian(grid), 0.5) == pytest.approx(_gaussian_energy(0.5), rel=1e-6)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_plane_wave_energy(self, a):
        """√a e^{ix}, ε = 0: E = aπ - a²π/2"""
        grid = make_grid(64, 2 * np.pi)
        u = Field.physical(grid, np.sqrt(a) * np.exp(1j * grid.x))
        assert energy(u, 0.0) == pytest.approx(a * np.pi - 0.5 * a**2 * np.pi, rel=1e-12)

    def test_energy_drift_second_order(self, grid):
        """dt 절반 → 에너지 변화 약 1/4"""
        coarse = _energy_drift(grid, 0.25, 2e-3, 0.5)
        fine = _energy_drift(grid, 0.25, 1e-3, 0.5)
        assert 3.0 <= coarse / fine <= 5.0


class TestSplitSteps:
    """부분 흐름"""

    def test_nonlinear_step_keeps_modulus(self, grid):
        u = gaussian(grid, amp=2.0)
        out = nonlinear_step(u, 0.1, 0.5)
        np.testing.assert_allclose(np.abs(out.values), np.abs(u.values), atol=1e-14)

    def test_nonlinear_step_matches_rk4(self, grid):
        """u_t = iJ_ε(|u|²)u 를 잘게 나눈 RK4 로 적분한 값과 비교"""
        eps, dt, sub = 0.5, 1e-3, 100
        u0 = gaussian(grid, amp=2.0)
        j = j_multiplier(eps)(grid.freqs)

        def rhs(u):
            return 1j * np.fft.ifft(j * np.fft.fft(np.abs(u) ** 2)).real * u

        u, h = u0.values.copy(), dt / sub
        for _ in range(sub):
            k1 = rhs(u)
            k2 = rhs(u + 0.5 * h * k1)
            k3 = rhs(u + 0.5 * h * k2)
            k4 = rhs(u + h * k3)
            u = u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        np.testing.assert_allclose(nonlinear_step(u0, dt, eps).values, u, rtol=0, atol=1e-12)

    def test_time_reversal(self, grid):
        """대칭 분할이므로 -dt 로 같은 수만큼 되돌리면 초기값으로 돌아온다"""
        u0 = gaussian(grid, amp=1.5)
        forward = _final(u0, 0.5, 1e-3, 0.5)
        back = _final(forward, 0.5, -1e-3, 0.5)
        assert l2_norm(Field.physical(grid, back.values - u0.values)) <= 1e-8 * l2_norm(u0)

    def test_linear_limit_rate(self, grid):
        """진폭 a 에서 선형 전파와의 차이/a 는 O(a²)"""

        def gap(a):
            u0 = gaussian(grid, amp=a)
            u = _final(u0, 0.5, 1e-2, 1.0)
            return l2_norm(Field.physical(grid, u.values - linear_propagate(u0, 1.0, 0.5).values)) / a

        assert 90.0 <= gap(1e-2) / gap(1e-3) <= 110.0

    def test_strang_order(self, grid):
        """dt 를 절반씩 줄이면 오차가 1/4 (기준해 dt = 1.25e-4)"""
        u0 = gaussian(grid, width=2.0)
        ref = _final(u0, 0.25, 1.25e-4, 0.5).values
        errs = [l2_norm(Field.physical(grid, _final(u0, 0.25, dt, 0.5).values - ref)) for dt in (4e-3, 2e-3, 1e-3)]
        orders = np.log2(np.asarray(errs[:-1]) / np.asarray(errs[1:]))
        assert np.all((orders >= 1.9) & (orders <= 2.1)), orders

    def test_requires_physical(self, grid):
        with pytest.raises(UsageError, match="WRONG_SPACE"):
            strang_step(forward_transform(gaussian(grid)), 1e-3, 0.5)

    def test_small_amplitude_is_linear(self, grid):
        """진폭 1e-6: 비선형 효과는 O(1e-18), 선형 전파와의 차이 ≤ 1e-12"""
        u0 = gaussian(grid, amp=1e-6)
        u = u0.values
        for _, _, u in trajectory(u0, 0.5, 1e-2, 100, 100):
            pass
        exact = linear_propagate(u0, 1.0, 0.5)
        assert l2_norm(Field.physical(grid, u - exact.values)) <= 1e-12

    def test_zero_stays_zero(self, grid):
        z = Field.zeros(grid)
        out = strang_step(z, 1e-2, 1.0)
        assert np.all(out.values == 0)

    def test_nan_detected(self, grid):
        values = gaussian(grid).values.copy()
        values[10] = np.nan
        with pytest.raises(NumericalError, match="NAN_IN_STATE") as exc:
            list(trajectory(Field.physical(grid, values), 0.5, 1e-3, 5))
        assert exc.value.context["step"] == 1

    def test_dealias_removes_high_modes(self, grid):
        u = gaussian(grid, amp=3.0, width=0.3)
        out = strang_step(u, 1e-2, 0.0, dealias=True)
        high = np.abs(grid.signed_index()) > grid.n // 3
        assert np.max(np.abs(np.fft.fft(out.values)[high])) < 1e-10


class TestEvolve:
    """RunConfig 실행"""

    def test_diagnostics_frame(self):
        cfg = _run_config(t_final=0.01, diag_stride=2, sobolev_orders=[1.0, -1.0])
        result = evolve(cfg)
        frame = result.diagnostics.to_frame()
        assert list(frame.columns) == ["t", "mass", "energy", "hs_1", "hs_-1"]
        np.testing.assert_allclose(frame["t"], [0.0, 0.002, 0.004, 0.006, 0.008, 0.01], atol=1e-15)

    def test_dt_adjusted_to_horizon(self):
        result = evolve(_run_config(dt=0.3, t_final=1.0))
        assert result.steps == 3
        assert result.dt == pytest.approx(1.0 / 3.0)
        assert result.diagnostics.times[-1] == pytest.approx(1.0)

    def test_checkpoints_collected(self):
        result = evolve(_run_config(dt=1e-3, t_final=1e-2, checkpoint_stride=5))
        assert [k for k, _, _ in result.checkpoints] == [0, 5, 10]

    def test_zero_datum(self):
        result = evolve(_run_config(datum={"kind": "gaussian", "amp": 0.0}))
        frame = result.diagnostics.to_frame()
        assert (frame[["mass", "energy"]] == 0).all().all()
        assert result.diagnostics.relative_mass_drift() == 0.0

    def test_sech_datum_stays_single_bump(self):
        """ε = 0 솔리톤: 모양 유지, 질량 1e-12 보존"""
        grid = make_grid(512, 40.0)
        u0 = nls_soliton(grid)
        diag = Diagnostics.for_orders([])
        u = u0.values
        for _, t, u in trajectory(u0, 0.0, 1e-3, 1000, 100):
            diag.record(t, Field.physical(grid, u), 0.0)
        assert diag.relative_mass_drift() <= 1e-12
        assert np.max(np.abs(u)) == pytest.approx(np.sqrt(2.0), abs=1e-4)
        assert abs(grid.x[int(np.argmax(np.abs(u)))]) <= grid.dx


@slow
class TestConservationSuite:
    """n=512, L=40, T=2 수용 실행"""

    @pytest.mark.parametrize("eps", [0.0, 0.25, 1.0])
    def test_drifts(self, eps):
        grid = make_grid(512, 40.0)
        coarse = _energy_drift(grid, eps, 1e-3, 2.0)
        fine = _energy_drift(grid, eps, 5e-4, 2.0)
        assert coarse <= 1e-5
        assert 3.0 <= coarse / fine <= 5.0
        result = evolve(_run_config(n=512, eps=eps, t_final=2.0, diag_stride=100))
        assert result.diagnostics.relative_mass_drift() <= 1e-10
