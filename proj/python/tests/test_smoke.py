import json
import math
import os
import pathlib

import pytest

import toda_kdq as tk

FIXTURES = pathlib.Path(
    os.environ.get("TODA_KDQ_FIXTURE_DIR", pathlib.Path(__file__).resolve().parents[2] / "fixtures")
)


def test_two_particle_closed_form():
    s0 = tk.FlaschkaState([0.5], [0.0, 0.0])
    assert tk.hamiltonian(s0) == pytest.approx(1.0)
    rhs = tk.toda_rhs(s0)
    assert rhs.b == pytest.approx([0.5, -0.5])
    times, states = tk.integrate_toda(s0, 2.0, 1e-3)
    for t, s in zip(times[::200], states[::200]):
        assert s.a[0] == pytest.approx(0.5 / math.cosh(t), abs=1e-9)
    exact = tk.spectral_solve(s0, 2.0)
    assert exact.a[0] == pytest.approx(0.5 / math.cosh(2.0), abs=1e-12)


def test_spectrum_is_conserved():
    s0 = tk.FlaschkaState([0.4, 0.7, 0.3], [0.1, -0.2, 0.5, 0.0])
    before = tk.lax_eigenvalues(s0)
    after = tk.lax_eigenvalues(tk.spectral_solve(s0, 3.0))
    assert after == pytest.approx(before, abs=1e-10)


def test_moment_round_trip():
    atoms, weights = [-1.0, 0.2, 0.9], [0.3, 0.5, 0.2]
    diag, off = tk.jacobi_from_measure(atoms, weights)
    eig, mass = tk.spectral_data(diag, off)
    assert eig == pytest.approx(sorted(atoms), abs=1e-12)
    assert mass == pytest.approx(weights, abs=1e-12)
    z = 0.3 + 2.0j
    assert tk.continued_fraction(diag, off, z) == pytest.approx(tk.stieltjes_transform(atoms, weights, z))


def test_harmonics_and_kernel():
    assert tk.dim_harmonics(3, 2) == 5
    assert len(tk.harmonic_indices(3, 2)) == 9
    theta, x = [0.0, 0.6, 0.8], [0.1, -0.2, 0.05]
    series = tk.hua_kernel(2.0 + 0.5j, theta, x, 80)
    closed = tk.hua_kernel_closed(2.0 + 0.5j, theta, x)
    assert abs(series["value"] - closed) <= series["tail_bound"] + 1e-14


def test_origin_mass_transform():
    mu = tk.PseudoPositiveMeasure(3, {(0, 1): ([0.0], [1.0])})
    z = 2.0 + 1.0j
    res = tk.markov_stieltjes(mu, z, [0.0, 0.0, 1.0])
    assert res["value"] == pytest.approx(1.0 / z, abs=1e-15)
    assert tk.growth_condition(mu)[0]


def test_pseudo_toda_from_fixture():
    state = tk.PseudoTodaState.from_json((FIXTURES / "pseudo_toda.json").read_text())
    later = tk.evolve(state, 1.5)
    assert later.time == pytest.approx(state.time + 1.5)
    for idx in state.components:
        assert tk.component_hamiltonian(later, idx) == tk.component_hamiltonian(state, idx)
        assert sum(later.components[idx][1]) == pytest.approx(1.0, abs=1e-12)
        f = tk.component_flaschka(later, idx)
        assert all(a > 0 for a in f.a)
    back = json.loads(later.to_json())
    assert back["n"] == 3


def test_iso_flow_is_monotone():
    s = tk.IsoFlowState(2, {(0, 1): ([0.5, 1.0], [0.3, 0.7]), (1, 2): ([0.8], [0.4])})
    grid = [0.1 * i for i in range(11)]
    monotone, increase, _ = tk.monotonicity_check(s, grid)
    assert monotone and increase <= 0.0
    later = tk.riccati_evolve(s, 1.0)
    assert later.components[(1, 2)][1][0] < 0.4


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        tk.FlaschkaState([-1.0], [0.0, 0.0])
    with pytest.raises(tk.InvalidArgument):
        tk.PseudoTodaState(3, {(0, 1): ([1.0], [0.5])})
    mu = tk.PseudoPositiveMeasure(2, {(0, 1): ([2.0], [1.0])})
    with pytest.raises(ArithmeticError):
        tk.markov_stieltjes(mu, 1.0 + 0.0j, [1.0, 0.0])
