"""
Static figures of a run, written as SVG:

    paths.svg       end-effector paths (start x, end o), 3D axes when m = 3
    errors.svg      edge errors against time
    estimates.svg   kinematic parameter estimates against time
    joints.svg      joint angles and joint velocities against time
"""

import logging
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from backend.sim.trace import SimulationTrace  # noqa: E402
from utils.error import TraceIOError  # noqa: E402
from utils.tracewriter import AXES, require_samples  # noqa: E402

logger = logging.getLogger(__name__)

# no timestamps in the files
SVG_METADATA = {"Date": None}


def _save(fig, directory: str, name: str) -> str:
    path = os.path.join(directory, name)
    try:
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))
    finally:
        plt.close(fig)
    return path


def plot_paths(trace: SimulationTrace, directory: str) -> str:
    x = trace.x
    dimension = x.shape[2]
    fig = plt.figure(figsize=(6, 6))
    if dimension == 3:
        ax = fig.add_subplot(111, projection="3d")
    else:
        ax = fig.add_subplot(111)
    for i in range(x.shape[1]):
        path = [x[:, i, j] for j in range(dimension)]
        (line,) = ax.plot(*path, label="agent %d" % (i + 1))
        color = line.get_color()
        ax.plot(*[[p[0]] for p in path], marker="x", color=color, linestyle="none")
        ax.plot(*[[p[-1]] for p in path], marker="o", mfc="none", color=color, linestyle="none")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    if dimension == 3:
        ax.set_zlabel("z [m]")
    else:
        ax.set_aspect("equal", adjustable="datalim")
        ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_title("end-effector paths")
    return _save(fig, directory, "paths.svg")


def plot_errors(trace: SimulationTrace, directory: str) -> str:
    fig, ax = plt.subplots(1, 1, figsize=(8, 4))
    e = trace.e
    displacement = e.ndim == 3
    for k in range(e.shape[1]):
        if displacement:
            for j in range(e.shape[2]):
                ax.plot(trace.t, e[:, k, j], label="e%d_%s" % (k + 1, AXES[j]))
        else:
            ax.plot(trace.t, e[:, k], label="e%d" % (k + 1))
    ax.set_xlabel("time [s]")
    ax.set_ylabel("edge error [m]" if displacement else "edge error [m^2]")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_title("formation errors")
    return _save(fig, directory, "errors.svg")


def plot_estimates(trace: SimulationTrace, directory: str) -> str:
    fig, ax = plt.subplots(1, 1, figsize=(8, 4))
    if trace.a_hat is None:
        ax.set_title("no kinematic estimate (fixed parameters)")
    else:
        for i in range(trace.a_hat.shape[1]):
            for j in range(trace.a_hat.shape[2]):
                ax.plot(trace.t, trace.a_hat[:, i, j], label="a%d_%d" % (i + 1, j + 1))
        ax.legend(loc="best", fontsize=8)
        ax.set_title("kinematic parameter estimates")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("estimate [m]")
    ax.grid(True, alpha=0.3)
    return _save(fig, directory, "estimates.svg")


def plot_joints(trace: SimulationTrace, directory: str) -> str:
    fig, axs = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    for signal, ax, unit in ((trace.q, axs[0], "rad"), (trace.xi, axs[1], "rad/s")):
        for i in range(signal.shape[1]):
            for j in range(signal.shape[2]):
                ax.plot(trace.t, signal[:, i, j], label="%d.%d" % (i + 1, j + 1))
        ax.grid(True, alpha=0.3)
        ax.set_ylabel("[%s]" % unit)
    axs[0].set_title("joint angles q")
    axs[1].set_title("joint velocities xi")
    axs[1].set_xlabel("time [s]")
    axs[0].legend(loc="best", fontsize=7, ncol=2)
    return _save(fig, directory, "joints.svg")


def emit_plots(trace: SimulationTrace, directory: str) -> list[str]:
    require_samples(trace)
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise TraceIOError(directory, e.strerror or str(e))
    written = [
        plot_paths(trace, directory),
        plot_errors(trace, directory),
        plot_estimates(trace, directory),
        plot_joints(trace, directory),
    ]
    logger.info("wrote %d figures to %s", len(written), directory)
    return written
