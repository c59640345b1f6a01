# Copyright 2026 The combtrap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import combtrap as ct


def reference():
    ion = ct.IonSpec()
    ion.qubit_splitting_hz = 12.6428e9
    ion.detuning_hz = 9e12
    ion.linewidth_hz = 19.6e6
    ion.saturation_intensity = 0.15
    ion.modes = [ct.TrapMode(1.64e6, 0.1)]
    spec = ct.PulseTrainSpec()
    spec.carrier_frequency_hz = 8.444858e14
    spec.rep_rate_hz = 80.78e6
    spec.pulse_duration_s = 1e-12
    spec.intensity_ratio = 500 / 0.15
    return ion, spec


def gate():
    g = ct.GateConfig()
    g.eta = 0.1
    g.omega = math.pi / (g.eta * 108e-6)
    g.delta, g.duration = ct.gate_parameters(g.eta, g.omega)
    g.trap_frequency = 2 * math.pi * 1.64e6
    g.period = 12.379e-9
    return g


def test_q_classes():
    ion, spec = reference()
    expected = [ct.Resonance.half_integer, ct.Resonance.integer, ct.Resonance.half_integer]
    for pick, want in zip((1, 2, 3), expected):
        spec.pick_divisor = pick
        assert ct.q_parameter(ion, spec).resonance == want
    spec.pick_divisor = 1
    with pytest.raises(ct.NotOnResonance):
        ct.raman_rabi_frequency(ion, spec)


def test_rabi_scan_matches_sin_squared():
    ion, spec = reference()
    spec.pick_divisor = 2
    theta = ct.pulse_area(ion, spec)
    rows = ct.carrier_rabi_scan(ion, spec, [k * 1e-6 for k in range(20)], threads=2)
    for _, pulses, p_up in rows:
        assert p_up == pytest.approx(math.sin(pulses * theta / 2) ** 2, abs=1e-9)


def test_grating_sum_against_numpy():
    theta, n = 0.37, 500
    direct = np.exp(1j * theta * np.arange(n)).sum()
    assert abs(ct.grating_sum(theta, n) - direct) < 1e-9


def test_gate_makes_bell_state():
    g = gate()
    rho = ct.ms_evolve_analytic(g)
    assert rho.shape == (4, 4)
    assert np.allclose(rho, rho.conj().T)
    fidelity, _ = ct.bell_overlap(rho)
    assert fidelity == pytest.approx(1.0, abs=1e-10)
    numeric = ct.ms_evolve_numeric(g)
    assert numeric["pulses"] == 8724
    assert ct.bell_overlap(numeric["rho"])[0] > 0.99


def test_parity_witness():
    rho = ct.ms_evolve_analytic(gate())
    scan = ct.parity_scan(rho, ct.uniform_phases(24))
    assert scan.contrast == pytest.approx(1.0, abs=1e-6)
    report = ct.fidelity_witness(rho, scan)
    assert report.fidelity == pytest.approx(1.0, abs=1e-6)
    assert report.fidelity_amplitude_reading == pytest.approx(0.75, abs=1e-6)
    assert report.entangled
    with pytest.raises(ct.InsufficientScan):
        ct.fit_parity([0.0, 0.1, 0.2], [1.0, 0.9, 0.8])


def test_presets_and_execute():
    assert "fig5_parity" in ct.preset_names()
    out = ct.execute(ct.preset("fig4b_cooling"))
    assert out["columns"] == ["cycle", "nbar", "total_population"]
    assert out["report"]["cycles_to_target"] is not None


def test_schema_errors_carry_problems():
    cfg = ct.preset("fig3_integer_q")
    cfg["laser"]["bogus"] = 1
    with pytest.raises(ct.SchemaError) as info:
        ct.validate_config(json.dumps(cfg))
    assert any("laser.bogus" in p for p in info.value.problems)


def test_cutoff_error_and_manifest(tmp_path):
    cfg = ct.preset("fig4b_cooling")
    cfg["numerics"]["cutoff"] = 80
    out = tmp_path / "cool.csv"
    with pytest.raises(ct.CutoffTooSmall) as info:
        ct.run(cfg, out=str(out))
    assert info.value.leakage > 1e-4
    manifest = json.loads((tmp_path / "cool.csv.manifest.json").read_text())
    assert manifest["status"] == "failed"


def test_run_writes_json(tmp_path):
    out = tmp_path / "rabi.json"
    manifest = ct.run(ct.preset("fig3_half_q"), out=str(out), format="json")
    assert manifest["status"] == "ok"
    doc = json.loads(out.read_text())
    assert len(doc["rows"]) == 201
