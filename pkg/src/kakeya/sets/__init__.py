"""Set-theoretic side: point-set graphs, typical sets, the Freiman embedding
and the random-progression reduction to F_p."""

from .graph import INF, PointSet, PointSetError, fibers, injectivity_check, project
from .typical import TypicalSetParams, TypicalSetError, flatten, min_radix, typical_set_build
from .freiman import FreimanError, FreimanReport, freiman_embed, phi_theta
from .progressions import (
    ProgressionTriple,
    ProgressionSample,
    markov_check,
    progression_sample,
    progression_sets,
    pry_verify,
)
from .pipeline import section4_pipeline

__all__ = [
    "INF", "PointSet", "PointSetError", "fibers", "injectivity_check", "project",
    "TypicalSetParams", "TypicalSetError", "flatten", "min_radix", "typical_set_build",
    "FreimanError", "FreimanReport", "freiman_embed", "phi_theta",
    "ProgressionTriple", "ProgressionSample", "markov_check", "progression_sample",
    "progression_sets", "pry_verify", "section4_pipeline",
]
