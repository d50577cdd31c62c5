"""
SimulationTrace: uniformly sampled signals of one run.

Shapes, with K samples, N agents, n joints, m task dimensions, p estimates:
    t (K,)  q, xi, u, eta (K, N, n)  x, e_hat (K, N, m)  a_hat (K, N, p)
    e (K, |E|) for distances, (K, |E|, m) for displacements
    sigma (K, N)  centroid (K, m)  U1, U2, U3, V_eta (K,)
eta and a_hat are None when the controller carries no such state; the
Lyapunov signals are None until `attach_lyapunov` ran.
"""

from __future__ import annotations

from typing import Any, Optional

import numpy as np

from utils.error import UsageError

SIGNALS = ("t", "q", "xi", "x", "e", "e_hat", "u", "eta", "a_hat", "sigma", "centroid")
LYAPUNOV = ("U1", "U2", "U3", "V_eta")


class SimulationTrace:
    def __init__(self, meta: Optional[dict[str, Any]] = None, **signals) -> None:
        # sizes and names the writer needs even for an empty trace
        self.meta: dict[str, Any] = dict(meta or {})
        for name in SIGNALS + LYAPUNOV:
            value = signals.pop(name, None)
            setattr(self, name, None if value is None else np.asarray(value, dtype=float))
        if signals:
            raise UsageError("unknown trace signal(s) %s" % ", ".join(sorted(signals)))
        if self.t is None:
            self.t = np.zeros(0)
        # filled by the engine
        self.singularity_warnings = 0
        self.metrics: dict[str, Any] = {}

    def __len__(self) -> int:
        return int(self.t.size)

    @property
    def num_agents(self) -> int:
        return 0 if self.q is None else int(self.q.shape[1])

    @property
    def has_lyapunov(self) -> bool:
        return self.U1 is not None

    def final(self, name: str) -> Optional[np.ndarray]:
        value = getattr(self, name)
        if value is None or len(self) == 0:
            return None
        return value[-1]

    def tail(self, fraction: float) -> slice:
        "The samples of the last `fraction` of the run (at least one)."
        if len(self) == 0:
            raise UsageError("the trace is empty")
        start = self.t[-1] - fraction * (self.t[-1] - self.t[0])
        first = int(np.searchsorted(self.t, start - 1e-12))
        return slice(min(first, len(self) - 1), len(self))

    def __str__(self) -> str:
        if len(self) == 0:
            return "trace(empty)"
        return "trace(%d samples over [%g, %g] s, %d agents)" % (
            len(self),
            self.t[0],
            self.t[-1],
            self.num_agents,
        )


class TraceRecorder:
    "Collects samples during a run, then freezes them into a trace."

    def __init__(self) -> None:
        self.samples: dict[str, list] = {name: [] for name in SIGNALS}

    def record(self, **sample) -> None:
        for name in SIGNALS:
            self.samples[name].append(sample.get(name))

    def freeze(self, meta: Optional[dict[str, Any]] = None) -> SimulationTrace:
        signals = {}
        for name, values in self.samples.items():
            if values and values[0] is not None:
                signals[name] = np.array(values)
        return SimulationTrace(meta, **signals)
