"""mvkit: multiview learning with a list-of-matrices estimator API."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    UNLABELED,
    MultiviewDataset,
    adjusted_rand_index,
    center_scale,
    is_unlabeled,
    validate_views,
)
from .cluster import (  # noqa: E402
    CoRegMultiviewSpectralClustering,
    MultiviewKMeans,
    MultiviewSphericalKMeans,
    MultiviewSpectralClustering,
)
from .compose import GaussianRandomProjection, RandomSubspace, concat_views, split_features  # noqa: E402
from .decompose import AJIVE, GroupICA, GroupPCA, amari_distance  # noqa: E402
from .embed import CCA, GCCA, KMCCA, MCCA, MVMDS, Omnibus  # noqa: E402
from .semisup import CTClassifier, CTRegressor  # noqa: E402

__all__ = [
    "UNLABELED",
    "MultiviewDataset",
    "adjusted_rand_index",
    "center_scale",
    "is_unlabeled",
    "validate_views",
    "CoRegMultiviewSpectralClustering",
    "MultiviewKMeans",
    "MultiviewSphericalKMeans",
    "MultiviewSpectralClustering",
    "GaussianRandomProjection",
    "RandomSubspace",
    "concat_views",
    "split_features",
    "AJIVE",
    "GroupICA",
    "GroupPCA",
    "amari_distance",
    "CCA",
    "GCCA",
    "KMCCA",
    "MCCA",
    "MVMDS",
    "Omnibus",
    "CTClassifier",
    "CTRegressor",
]
