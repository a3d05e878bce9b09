"""Numerical tolerances.

Relative tolerances (``*_rel``) are multiplied by the norm of the matrix
they refer to; everything else is absolute.
"""
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    max_dim: int = 512
    tol_eig: float = 1e-10
    tol_solve: float = 1e-12
    rank_tol: float = 1e-12
    cluster_rel: float = 1e-7
    axis_rel: float = 1e-8
    pair_rel: float = 1e-7
    chain_tol: float = 1e-6
    proj_tol: float = 1e-8
    ring_tol: float = 1e-6
    herm_tol: float = 1e-10
    struct_tol: float = 1e-12
    angle_tol: float = 1e-8
    neutral_tol: float = 1e-9
    inv_tol: float = 1e-9
    sym_tol: float = 1e-8
    ricc_tol: float = 1e-9
    order_tol: float = 1e-8
    graph_cond_cap: float = 1e8
    dedup_rel: float = 1e-6
    match_tol: float = 1e-6
    dominance_tol: float = 0.05
    slope_tol: float = 0.1
    qtol: float = 0.05

    def override(self, **changes):
        """Return a copy with ``changes`` applied; unknown keys raise ``KeyError``."""
        known = {f.name: f.type for f in fields(self)}
        clean = {}
        for key, value in changes.items():
            if key not in known:
                raise KeyError(f"unknown tolerance key {key!r}")
            clean[key] = int(value) if key == "max_dim" else float(value)
        return replace(self, **clean)


DEFAULT = Tolerances()


def resolve(tols):
    return DEFAULT if tols is None else tols
