"""Delimited output writers: trajectory CSV, decompactified surface CSV."""

from __future__ import annotations

import csv
from pathlib import Path

from .certify import BlowupCertificate
from .integrator import EnclosureStep
from .model import ProblemParams

__all__ = ["write_certificate", "write_trajectory_csv", "write_surface_csv"]


def write_certificate(path: Path, cert: BlowupCertificate) -> None:
    path.write_text(cert.to_json() + "\n")


def write_trajectory_csv(path: Path, p: ProblemParams,
                         steps: list[EnclosureStep]) -> None:
    """One row per accepted step: tau, t, s, then x_i endpoint pairs."""
    header = ["tau_lo", "tau_hi", "t_lo", "t_hi", "s_lo", "s_hi"]
    for i in p.reduced_indices:
        header += [f"x_{i}_lo", f"x_{i}_hi"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for st in steps:
            row = [st.tau.lo, st.tau.hi,
                   st.state.t.lo, st.state.t.hi,
                   st.state.c.s.lo, st.state.c.s.hi]
            for xi in st.state.c.x:
                row += [xi.lo, xi.hi]
            w.writerow([repr(v) for v in row])


def write_surface_csv(path: Path, p: ProblemParams,
                      steps: list[EnclosureStep]) -> None:
    """Midpoint solution profiles (t_mid, y_i, u_i_mid), physical points only."""
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t_mid", "y_i", "u_i_mid"])
        c = p.center
        for st in steps:
            s = st.state.c.s
            if s.lo <= 0.0:
                continue
            t_mid = st.state.t.mid()
            s_mid = s.mid()
            xs = {i: xi.mid() for i, xi in zip(p.reduced_indices, st.state.c.x)}
            for i in range(1, p.n):
                u = 1.0 / s_mid if i == c else xs[i] / s_mid
                w.writerow([repr(t_mid), repr(i / p.n), repr(u)])
