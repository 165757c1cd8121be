"""Closed-form Big / NonBig decisions for the measure families.

A measure mu is *Big* for the process with index alpha in dimension dim when
the additive functional A_t = int_0^t w(X_s) ds diverges almost surely from
every starting point, equivalently when the gauge E_x[exp(-A_infty)] vanishes
identically; bounded solutions of the associated stationary problem are then
constant (the Liouville property). NonBig means the gauge is positive
somewhere. Each rule below is a sharp threshold in the family parameters;
every boundary case sits on the Big side.

Rule identifiers attached to verdicts:

=========================  =================================================
radial-power-threshold     PowerWeight: Big iff p >= -alpha
boundary-recurrence        BoundaryPower, alpha <= 1: every nontrivial
                           weight is Big (the censored process is recurrent)
boundary-power-threshold   BoundaryPower, alpha in (1, 2]: Big iff r >= alpha
annulus-exponent-above-alpha  AnnulusSeries, r > alpha: NonBig
annulus-mass-series        AnnulusSeries, r <= alpha < dim, alpha > 1:
                           Big iff sum f(n)^(alpha-r) h(n) diverges
                           (parametric: q <= p(alpha-r)+1)
annulus-low-alpha          AnnulusSeries, alpha <= 1, r <= alpha: NonBig when
                           the mass series converges, Inconclusive otherwise
sphere-mass-series         SphereSeries, alpha in (1,2): Big iff
                           sum s_n^(alpha-1-r) diverges (parametric:
                           r <= alpha-1, or p <= 1/(r-alpha+1))
tabulated-tail-unsettled   a tabulated sequence without a tail rule leaves
                           the deciding series unsettled: Inconclusive
potential-divergence       numeric route: Big iff the Riesz potential is
                           identically infinite while finite on compacts
=========================  =================================================
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AlphaOutOfRange, DecayHypothesisUnavailable, NotTransient
from .kernels import FreeSpace, KernelModel
from .measures import (
    AnnulusSeries,
    BoundaryPower,
    MeasureSpec,
    PowerWeight,
    Seq,
    SphereSeries,
    describe,
    require_admissible,
)

__all__ = [
    "Conclusion",
    "Verdict",
    "classify",
    "classify_radial_weight",
    "classify_boundary_weight",
    "classify_annulus",
    "classify_sphere_series",
    "volume_decay_report",
    "VolumeDecayReport",
    "divergence_by_potential",
]


class Conclusion(enum.Enum):
    BIG = "Big"
    NON_BIG = "NonBig"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    conclusion: Conclusion
    rule: str
    family: str
    params: dict
    alpha: float
    dim: int
    witness: dict = field(default_factory=dict)

    @property
    def is_big(self) -> bool:
        return self.conclusion is Conclusion.BIG

    def to_row(self) -> dict:
        """Flat, CSV/JSON-friendly record."""
        return {
            "family": self.family,
            "params": json.dumps(self.params, sort_keys=True),
            "alpha": self.alpha,
            "dim": self.dim,
            "conclusion": self.conclusion.value,
            "rule": self.rule,
            "witness": json.dumps(self.witness, sort_keys=True),
        }


def _verdict(conclusion, rule, mu, alpha, dim, witness) -> Verdict:
    family, params = describe(mu)
    return Verdict(conclusion, rule, family, params, float(alpha), int(dim), witness)


def _require_transient(alpha: float, dim: int):
    if not (0 < alpha <= 2):
        raise AlphaOutOfRange(f"alpha must be in (0, 2], got {alpha}")
    if dim <= alpha:
        raise NotTransient(f"need dim > alpha for a free-space Green function, got dim={dim}, alpha={alpha}")


def _series_tail_decision(term_exponent: Optional[float]) -> Optional[bool]:
    """Does sum n^e diverge? None when the exponent is unknown."""
    if term_exponent is None:
        return None
    return term_exponent >= -1.0


def classify_radial_weight(p: float, alpha: float, dim: int) -> Verdict:
    """PowerWeight (1+|y|)^p: Big iff p >= -alpha."""
    _require_transient(alpha, dim)
    big = p >= -alpha
    return _verdict(
        Conclusion.BIG if big else Conclusion.NON_BIG,
        "radial-power-threshold",
        PowerWeight(p),
        alpha,
        dim,
        {"p": p, "threshold": -alpha, "margin": p + alpha},
    )


def classify_boundary_weight(r: float, alpha: float, radius: float = 1.0, dim: int = 3) -> Verdict:
    """BoundaryPower dist^(-r) on an absorbing ball.

    For alpha <= 1 the censored process never reaches the boundary and is
    recurrent, so any nontrivial weight accumulates without bound: Big.
    For alpha in (1, 2] the threshold is r >= alpha.
    """
    if not (0 < alpha <= 2):
        raise AlphaOutOfRange(f"alpha must be in (0, 2], got {alpha}")
    mu = BoundaryPower(r=r, radius=radius)
    if alpha <= 1.0:
        return _verdict(
            Conclusion.BIG,
            "boundary-recurrence",
            mu,
            alpha,
            dim,
            {"r": r, "note": "recurrent censored process, any nontrivial weight"},
        )
    big = r >= alpha
    return _verdict(
        Conclusion.BIG if big else Conclusion.NON_BIG,
        "boundary-power-threshold",
        mu,
        alpha,
        dim,
        {"r": r, "threshold": alpha, "margin": r - alpha},
    )


def _annulus_series_exponent(mu: AnnulusSeries, alpha: float) -> Optional[float]:
    """Exponent e with f(n)^(alpha-r) h(n) ~ n^e, None when tails are unknown."""
    tp = mu.growth.tail_power()
    th = mu.gap.tail_power()
    if tp is None or th is None:
        return None
    return tp * (alpha - mu.r) + th


def _annulus_partial_sums(mu: AnnulusSeries, alpha: float, n_terms: int) -> dict:
    upto = n_terms
    for seq in (mu.growth, mu.gap):
        if not seq.is_parametric and seq.tail_exponent is None:
            upto = min(upto, seq.table_len)
    n = np.arange(1, upto + 1, dtype=float)
    terms = mu.growth(n) ** (alpha - mu.r) * mu.gap(n)
    sums = np.cumsum(terms)
    marks = [10, 100, 1000, 10_000, 100_000, 1_000_000]
    return {
        "terms_summed": int(upto),
        "partial_sums": {str(m): float(sums[m - 1]) for m in marks if m <= upto},
    }


def classify_annulus(
    mu: AnnulusSeries, alpha: float, dim: int, n_terms: int = 1_000_000
) -> Verdict:
    """AnnulusSeries |y|^(-r) on windows [f(n), f(n)(1+h(n))].

    r > alpha makes the mass series converge regardless of the windows:
    NonBig. For r <= alpha and alpha > 1, Big iff sum f(n)^(alpha-r) h(n)
    diverges; with f(n) = n^p, h(n) = n^(-q) that reads q <= p(alpha-r) + 1,
    boundary included. For alpha <= 1 a convergent series still gives
    NonBig, but the divergent case is Inconclusive here (the divergence
    route needs alpha > 1).
    """
    _require_transient(alpha, dim)
    require_admissible(mu, n_max=min(n_terms, 100_000))
    if mu.r > alpha:
        return _verdict(
            Conclusion.NON_BIG,
            "annulus-exponent-above-alpha",
            mu,
            alpha,
            dim,
            {"r": mu.r, "alpha": alpha},
        )
    exponent = _annulus_series_exponent(mu, alpha)
    diverges = _series_tail_decision(exponent)
    witness = {"series_term_exponent": exponent, "divergence_threshold": -1.0}
    witness.update(_annulus_partial_sums(mu, alpha, n_terms))
    if mu.growth.is_parametric and mu.gap.is_parametric:
        p, q = mu.growth.exponent, -mu.gap.exponent
        witness["q_bound"] = p * (alpha - mu.r) + 1.0
        witness["q"] = q
    if diverges is None:
        return _verdict(
            Conclusion.INCONCLUSIVE, "tabulated-tail-unsettled", mu, alpha, dim, witness
        )
    if alpha <= 1.0:
        if not diverges:
            return _verdict(
                Conclusion.NON_BIG, "annulus-low-alpha", mu, alpha, dim, witness
            )
        witness["note"] = "mass series diverges but the divergence route needs alpha > 1"
        return _verdict(
            Conclusion.INCONCLUSIVE, "annulus-low-alpha", mu, alpha, dim, witness
        )
    return _verdict(
        Conclusion.BIG if diverges else Conclusion.NON_BIG,
        "annulus-mass-series",
        mu,
        alpha,
        dim,
        witness,
    )


def classify_sphere_series(
    mu: SphereSeries, alpha: float, dim: int, n_terms: int = 1_000_000
) -> Verdict:
    """SphereSeries with weights s_n^(-r): Big iff sum s_n^(alpha-1-r) diverges.

    Proved for alpha strictly between 1 and 2. With s_n = n^p the series is
    sum n^(p(alpha-1-r)): divergent for every p when r <= alpha - 1, and for
    p <= 1/(r - alpha + 1) otherwise (boundary included).
    """
    if not (1.0 < alpha < 2.0):
        raise AlphaOutOfRange(
            f"sphere-series rule is proved for alpha in (1, 2), got {alpha}"
        )
    _require_transient(alpha, dim)
    tp = mu.radii.tail_power()
    exponent = None if tp is None else tp * (alpha - 1.0 - mu.r)
    diverges = _series_tail_decision(exponent)
    witness = {"series_term_exponent": exponent, "divergence_threshold": -1.0}
    if mu.radii.is_parametric:
        p = mu.radii.exponent
        witness["p"] = p
        if mu.r > alpha - 1.0:
            witness["p_bound"] = 1.0 / (mu.r - alpha + 1.0)
        else:
            witness["note"] = "r <= alpha - 1: Big for every radius growth rate"
    if diverges is None:
        upto = min(n_terms, mu.radii.table_len)
        n = np.arange(1, upto + 1, dtype=float)
        sums = np.cumsum(mu.radii(n) ** (alpha - 1.0 - mu.r))
        witness["terms_summed"] = int(upto)
        witness["partial_sum"] = float(sums[-1]) if upto else 0.0
        return _verdict(
            Conclusion.INCONCLUSIVE, "tabulated-tail-unsettled", mu, alpha, dim, witness
        )
    return _verdict(
        Conclusion.BIG if diverges else Conclusion.NON_BIG,
        "sphere-mass-series",
        mu,
        alpha,
        dim,
        witness,
    )


def classify(mu: MeasureSpec, alpha: float, dim: int, **kwargs) -> Verdict:
    """Dispatch to the family rule."""
    if isinstance(mu, PowerWeight):
        return classify_radial_weight(mu.p, alpha, dim)
    if isinstance(mu, AnnulusSeries):
        return classify_annulus(mu, alpha, dim, **kwargs)
    if isinstance(mu, SphereSeries):
        return classify_sphere_series(mu, alpha, dim, **kwargs)
    if isinstance(mu, BoundaryPower):
        return classify_boundary_weight(mu.r, alpha, radius=mu.radius, dim=dim)
    raise TypeError(f"not a measure family: {type(mu).__name__}")


@dataclass(frozen=True)
class VolumeDecayReport:
    """Window-volume growth against the verdict, for the annulus family.

    volume_exponent is the growth order of vol(window n) = n^(p dim - q) at
    r = 0 scaling; paradoxical means the window volumes decay (q > p dim)
    while the measure is still Big.
    """

    p: float
    q: float
    r: float
    alpha: float
    dim: int
    volume_exponent: float
    total_volume_finite: bool
    verdict: Verdict
    paradoxical: bool


def volume_decay_report(p: float, q: float, r: float, alpha: float, dim: int) -> VolumeDecayReport:
    mu = AnnulusSeries.parametric(p=p, q=q, r=r)
    verdict = classify_annulus(mu, alpha, dim)
    vol_exp = p * dim - q
    return VolumeDecayReport(
        p=p,
        q=q,
        r=r,
        alpha=alpha,
        dim=dim,
        volume_exponent=vol_exp,
        total_volume_finite=vol_exp < -1.0,
        verdict=verdict,
        paradoxical=(q > p * dim) and verdict.is_big,
    )


def divergence_by_potential(mu: MeasureSpec, model: KernelModel, x0) -> Verdict:
    """Numeric route: Big iff the Riesz potential diverges at x0.

    Valid when the divergence of U_mu at one point forces divergence
    everywhere and divergence of the functional A_infty: certified here for
    rotation-invariant measures in free space with alpha in (1, 2] (the
    far-field decay of potentials of finite measures does the rest). The
    measure must be finite on compacts.
    """
    if not isinstance(model.variant, FreeSpace):
        raise DecayHypothesisUnavailable(
            "potential-divergence route is certified for free space only; "
            "use the closed-form boundary rule for the absorbing ball"
        )
    if model.alpha <= 1.0:
        raise DecayHypothesisUnavailable(
            f"potential-divergence route needs alpha in (1, 2], got {model.alpha}"
        )
    model.require_transient()
    if isinstance(mu, BoundaryPower) and mu.r >= 1.0:
        raise ValueError(
            "measure is not finite on compacts (boundary exponent r >= 1); "
            "the potential criterion does not apply"
        )
    from .potentials import riesz_potential

    result = riesz_potential(mu, x0, model)
    family, params = describe(mu)
    witness = {
        "x0_norm": float(math.hypot(*([x0] if isinstance(x0, (int, float)) else list(x0)))),
        "value": result.value,
        "divergent": result.divergent,
        "compact_part": result.compact_part,
        "certificate": "rotation-invariant measure, free space, alpha in (1,2]",
    }
    conclusion = Conclusion.BIG if result.divergent else Conclusion.NON_BIG
    if _tail_truncated(mu):
        witness["note"] = (
            "tabulated sequence without a tail rule: the verdict applies to "
            "the truncated measure, not to any intended continuation"
        )
    return Verdict(conclusion, "potential-divergence", family, params, model.alpha, model.dim, witness)


def _tail_truncated(mu: MeasureSpec) -> bool:
    seqs: tuple[Seq, ...]
    if isinstance(mu, AnnulusSeries):
        seqs = (mu.growth, mu.gap)
    elif isinstance(mu, SphereSeries):
        seqs = (mu.radii,)
    else:
        return False
    return any(not s.is_parametric and s.tail_exponent is None for s in seqs)
