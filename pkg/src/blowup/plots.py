"""Figure rendering for certified runs (file output only, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .certify import BlowupCertificate  # noqa: E402
from .integrator import EnclosureStep  # noqa: E402
from .lyapunov import lyapunov_value  # noqa: E402
from .model import ProblemParams  # noqa: E402

__all__ = ["render_surface", "render_decay"]


def render_surface(path: Path, p: ProblemParams, steps: list[EnclosureStep],
                   cert: BlowupCertificate) -> None:
    """(t, y, u) profile surface from decompactified midpoints."""
    c = p.center
    ts, rows = [], []
    for st in steps:
        s = st.state.c.s
        if s.lo <= 0.0:
            continue
        s_mid = s.mid()
        xs = {i: xi.mid() for i, xi in zip(p.reduced_indices, st.state.c.x)}
        prof = [0.0]
        for i in range(1, p.n):
            prof.append(1.0 / s_mid if i == c else xs[i] / s_mid)
        prof.append(0.0)
        ts.append(st.state.t.mid())
        rows.append(prof)
    ys = np.arange(0, p.n + 1) / p.n
    tg, yg = np.meshgrid(ts, ys, indexing="ij")
    fig = plt.figure(figsize=(7, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(tg, yg, np.array(rows), cmap="viridis",
                    linewidth=0.2, edgecolor="k", alpha=0.9)
    ax.set_xlabel("t")
    ax.set_ylabel("y")
    ax.set_zlabel("u")
    ax.set_title(f"validated profiles, n={p.n}, m={p.m}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_decay(path: Path, p: ProblemParams, steps: list[EnclosureStep],
                 cert: BlowupCertificate) -> None:
    """Decay of s and of L toward the horizon equilibrium, log scale."""
    taus = [st.tau.hi for st in steps]
    s_mid = [st.state.c.s.mid() for st in steps]
    l_hi = [lyapunov_value(st.state.c).hi for st in steps]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.semilogy(taus, s_mid, label="s")
    ax.semilogy(taus, l_hi, label="L upper bound")
    ax.axhline(cert.epsilon, color="gray", linestyle=":", label="sublevel threshold")
    ax.set_xlabel(r"rescaled time $\tau$")
    ax.legend(loc="best")
    ax.set_title(f"approach to the horizon, n={p.n}, m={p.m}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
