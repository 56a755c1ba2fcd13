"""Joint embeddings: CCA family, multiview MDS and omnibus embedding."""

from .cca import CCA, cca_fit, cca_transform
from .gcca import GCCA, gcca_fit
from .mcca import KMCCA, MCCA, center_gram, kernel_matrix, kmcca_fit, mcca_fit
from .mds import (
    MVMDS,
    Omnibus,
    OmnibusResult,
    classical_mds,
    mvmds_fit_transform,
    omnibus_fit_transform,
    omnibus_matrix,
)

__all__ = [
    "CCA",
    "GCCA",
    "KMCCA",
    "MCCA",
    "MVMDS",
    "Omnibus",
    "OmnibusResult",
    "cca_fit",
    "cca_transform",
    "center_gram",
    "classical_mds",
    "gcca_fit",
    "kernel_matrix",
    "kmcca_fit",
    "mcca_fit",
    "mvmds_fit_transform",
    "omnibus_fit_transform",
    "omnibus_matrix",
]
