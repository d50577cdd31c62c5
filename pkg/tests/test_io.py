import json
import os

import numpy as np
import pytest

from backend.sim.engine import Simulator
from backend.sim.trace import LYAPUNOV, SimulationTrace
from frontend.scenariogen.loader import parse_scenario
from utils.error import TraceIOError, UsageError
from utils.plots import emit_plots
from utils.tracewriter import read_trace, write_trace

from .conftest import scenario_path, square_scenario

TABLES = ["positions.csv", "errors.csv", "joints.csv", "estimates.csv", "controls.csv", "lyapunov.csv"]


@pytest.fixture(scope="module")
def exact_trace():
    return Simulator(square_scenario(simulation="T = 0.03; stride = 10;")).run()


@pytest.fixture(scope="module")
def adaptive_trace():
    scenario = parse_scenario(scenario_path("square2d_compact.scn")).with_simulation(T=0.02)
    return Simulator(scenario).run()


def header(path):
    with open(path) as f:
        return f.readline().rstrip("\n").split(",")


def test_every_table_is_written(exact_trace, tmp_path):
    written = write_trace(exact_trace, str(tmp_path))
    assert sorted(os.path.basename(p) for p in written) == sorted(TABLES + ["summary.json"])


def test_headers_carry_units(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path))
    assert header(tmp_path / "errors.csv") == ["t [s]"] + ["e%d [m^2]" % k for k in range(1, 6)]
    positions = header(tmp_path / "positions.csv")
    assert positions[:3] == ["t [s]", "x1 [m]", "y1 [m]"]
    assert positions[-2:] == ["cx [m]", "cy [m]"]
    assert header(tmp_path / "lyapunov.csv") == ["t [s]"] + ["%s [J]" % name for name in LYAPUNOV]
    assert "q1_1 [rad]" in header(tmp_path / "joints.csv")
    assert "xi4_2 [rad/s]" in header(tmp_path / "joints.csv")


def test_tables_without_state_keep_only_time(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path))
    assert header(tmp_path / "estimates.csv") == ["t [s]"]
    assert not any(cell.startswith("eta") for cell in header(tmp_path / "controls.csv"))


def test_rows_follow_the_samples(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path))
    rows = np.loadtxt(tmp_path / "errors.csv", delimiter=",", skiprows=1, ndmin=2)
    assert rows.shape == (len(exact_trace), 6)
    assert np.array_equal(rows[:, 0], exact_trace.t)
    assert np.array_equal(rows[:, 1:], exact_trace.e)


def test_summary(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path), {"converged": False})
    with open(tmp_path / "summary.json") as f:
        summary = json.load(f)
    assert summary["meta"]["variant"] == "exact"
    assert summary["meta"]["agents"] == 4
    assert summary["diagnostics"] == {"converged": False}
    assert set(summary["metrics"]) >= {"max_edge_error", "centroid_drift", "converged"}


def test_rewrites_are_byte_identical(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path / "a"))
    write_trace(exact_trace, str(tmp_path / "b"))
    for name in TABLES + ["summary.json"]:
        with open(tmp_path / "a" / name, "rb") as f, open(tmp_path / "b" / name, "rb") as g:
            assert f.read() == g.read()


def test_trace_survives_a_round_trip(adaptive_trace, tmp_path):
    write_trace(adaptive_trace, str(tmp_path))
    back = read_trace(str(tmp_path))
    assert len(back) == len(adaptive_trace)
    for name in ("t", "q", "xi", "x", "e", "u", "a_hat", "sigma", "centroid", "U1", "U3"):
        assert np.array_equal(getattr(back, name), getattr(adaptive_trace, name)), name
    assert back.eta is None
    assert back.singularity_warnings == adaptive_trace.singularity_warnings
    assert back.metrics["converged"] == adaptive_trace.metrics["converged"]


def test_empty_trace_gives_header_only_tables(tmp_path):
    meta = dict(agents=4, edges=5, dimension=2, flavor="distance", dof=2, params=2)
    write_trace(SimulationTrace(meta), str(tmp_path))
    with open(tmp_path / "errors.csv") as f:
        lines = f.read().splitlines()
    assert lines == ["t [s]," + ",".join("e%d [m^2]" % k for k in range(1, 6))]
    assert len(header(tmp_path / "estimates.csv")) == 1 + 8


def test_displacement_edges_are_split_per_axis(tmp_path):
    meta = dict(agents=2, edges=1, dimension=3, flavor="displacement", dof=3, params=2)
    write_trace(SimulationTrace(meta), str(tmp_path))
    assert header(tmp_path / "errors.csv") == ["t [s]", "e1_x [m]", "e1_y [m]", "e1_z [m]"]


def test_reading_a_missing_trace(tmp_path):
    with pytest.raises(TraceIOError) as info:
        read_trace(str(tmp_path / "nowhere"))
    assert info.value.exitCode == 1


def test_reading_a_truncated_table(exact_trace, tmp_path):
    write_trace(exact_trace, str(tmp_path))
    with open(tmp_path / "joints.csv") as f:
        lines = f.read().splitlines()
    with open(tmp_path / "joints.csv", "w") as f:
        f.write("\n".join(lines[:-1]) + "\n")
    with pytest.raises(TraceIOError):
        read_trace(str(tmp_path))


def test_writing_into_a_file_fails(exact_trace, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    with pytest.raises(TraceIOError):
        write_trace(exact_trace, str(blocker / "trace"))


def test_four_figures(adaptive_trace, tmp_path):
    written = emit_plots(adaptive_trace, str(tmp_path / "figures"))
    assert [os.path.basename(p) for p in written] == ["paths.svg", "errors.svg", "estimates.svg", "joints.svg"]
    for path in written:
        with open(path) as f:
            assert "<svg" in f.read()


def test_figures_of_a_spatial_run(tmp_path):
    scenario = parse_scenario(scenario_path("tetra3d.scn")).with_simulation(T=0.01)
    written = emit_plots(Simulator(scenario).run(), str(tmp_path))
    assert all(os.path.getsize(path) > 0 for path in written)


def test_figures_need_samples(tmp_path):
    with pytest.raises(UsageError):
        emit_plots(SimulationTrace(), str(tmp_path))
