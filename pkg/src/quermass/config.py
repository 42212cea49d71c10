"""Central configuration: default tolerances and run parameters.

Every numerical check in the package reads its tolerance from a
:class:`Tolerances` instance so that a single run can override any of
them (``--tolerance KEY=VAL`` on the command line).
"""

from __future__ import annotations

import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Default numerical tolerances, overridable per run."""

    # grid / basis construction
    node_norm: float = 1e-14
    weight_sum_rel: float = 1e-12
    quad_exact_rel: float = 1e-10
    # spectral transforms
    roundtrip: float = 1e-10
    parseval_rel: float = 1e-9
    orthonormality: float = 1e-10
    # differential operators
    tangency: float = 1e-10
    eigen_sup: float = 1e-8
    trace_hessian: float = 1e-8
    integration_by_parts: float = 1e-8
    # curvature
    mean_curvature_agree: float = 1e-7
    unit_normal: float = 1e-12
    # frequency split
    poincare_rel: float = 1e-8
    # normalization loop
    normalize_scale_rel: float = 1e-10
    normalize_center: float = 1e-8
    normalize_max_iter: int = 50
    # gradient-vs-normal comparison checks
    deviation_ratio_bound: float = 10.0
    # cubic-term lemma slack constants
    cubic_slack: float = 5.0
    radial_remainder: float = 5.0
    # pole gradient estimate
    pole_slack: float = 1.1
    pole_constant: float = 3.0
    # cross-checks between 1-D and 2-D pipelines
    cross_check_rel: float = 1e-6
    dent_cross_check_rel: float = 1e-2

    def with_overrides(self, overrides: dict[str, float]) -> "Tolerances":
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
        return dataclasses.replace(self, **overrides)


DEFAULT_TOLERANCES = Tolerances()


def default_frequency_cutoff(n: int) -> float:
    """Default eigenvalue cutoff for the low/high frequency split.

    Safely above the third Laplace-Beltrami eigenvalue 2n; configurable
    everywhere it is used.
    """
    return 10.0 * n


def thread_count() -> int:
    """Worker cap for suite-level parallel maps (QUERMASS_THREADS)."""
    raw = os.environ.get("QUERMASS_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        return 1
    return max(1, k)
