"""End-to-end reduction: distribution -> typical graph -> F_p graph ->
progression-restricted graph -> uniform (X', Y')."""

from __future__ import annotations

import math

from ..entropy import JointDist, cond_entropy, entropy, marginal, pushforward, uniform_graph_dist
from ..ratios import RSet, UnboundedWitnessError, kakeya_ratio, rset_clear_denominators, scale_x
from .freiman import freiman_embed
from .graph import INF, project
from .progressions import progression_sample
from .typical import TypicalSetParams, min_radix, typical_set_build, typicality_report

__all__ = ["default_gamma", "section4_pipeline"]


def default_gamma(D: JointDist, eps1: float = 0.05, floor: float = 0.05) -> float:
    """H(X|Y)/H(Y) - eps1, clamped into [floor, 1 - floor]."""
    hy = entropy(marginal(D, [1]))
    g = (cond_entropy(D, [0], [1]) / hy if hy > 0 else 0.0) - eps1
    return min(max(g, floor), 1 - floor)


def section4_pipeline(D: JointDist, R: RSet, P: TypicalSetParams, p: int, gamma: float | None = None,
                      seed: int = 0, progression_trials: int = 64) -> dict:
    Rz, mult = rset_clear_denominators(R)
    Dz = scale_x(D, mult)
    rs = Rz.scalars
    k = max(1, max(abs(int(r)) for r in rs))
    if gamma is None:
        gamma = default_gamma(Dz)

    max_abs = max(abs(v.numerator) for key in Dz for v in key)
    radix = P.baseM or min_radix(P.n, k, max_abs)
    params = TypicalSetParams(P.n, P.eps, radix)
    G = typical_set_build(Dz, params, k)
    typ = typicality_report(typical_set_build(Dz, TypicalSetParams(P.n, P.eps), k), Dz, params, rs)

    Gp, frep = freiman_embed(G, rs, p, seed=seed)
    sample = progression_sample(Gp, k, gamma, seed=(seed + 1) % 2**64, rset=rs, trials=progression_trials)
    GI = sample.G_I

    report = {
        "multiplier": mult,
        "k": k,
        "gamma": gamma,
        "radix": radix,
        "stages": {"G": len(G), "G_prime": len(Gp), "G_I": len(GI)},
        "typical": typ,
        "freiman": frep.to_dict(),
        "progression": sample.summary(),
    }
    if not GI.points:
        report.update(final=None, H_Y=0.0, log_vertical=None, projections=[], checks={},
                      ratio=0.0, ratio_mod_p=0.0)
        return report

    final = uniform_graph_dist(GI)
    hy = entropy(marginal(final, [1]))
    log_v = math.log2(len(project(GI, INF)))
    rows, hmax = [], 0.0
    ok_proj = True
    for r in rs:
        rr = int(r)
        h = entropy(pushforward(final, lambda key: ((key[0] + rr * key[1]) % p,)))
        lg = math.log2(len(project(GI, rr)))
        ok_proj &= h <= lg
        hmax = max(hmax, h)
        rows.append({"r": rr, "H": h, "log_size": lg})
    try:
        ratio = kakeya_ratio(final, Rz)
    except UnboundedWitnessError:
        ratio = 0.0
    report.update(
        final=final.to_dict(),
        H_Y=hy,
        log_vertical=log_v,
        projections=rows,
        checks={"vertical_equality": hy == log_v, "projection_bounds": bool(ok_proj)},
        ratio=ratio,
        ratio_mod_p=hy / hmax if hmax > 0 else 0.0,
    )
    return report
