"""Direct blockmodeling with a weighted correlation criterion."""

from .blockfit import TripletList, blockmodel_triplets, triplets_for
from .criteria import (BlockDiagnostics, Evaluation, PointBiserialParts, block_penalty,
                       evaluate, penalty, per_block_best_penalty, point_biserial,
                       weighted_correlation)
from .errors import (BlockmodelError, DataError, NotApplicableError, SearchLimitExceeded,
                     UndefinedCriterionError)
from .fixtures import FixtureUnavailable, fixture_status, load_fixture, register_fixture
from .io import (ResultDocument, SolutionRecord, format_partition, parse_blockimage,
                 parse_network, parse_partition, render_blockmodel)
from .model import (BlockImage, BlockType, BlockView, Network, Partition, block_view,
                    build_network, make_partition)
from .qap import QapResult, qap_test
from .search import (SearchParams, Solution, SolutionPool, count_optima, enumerate_blockimages,
                     enumerate_partitions, exhaustive_search, expand_ensemble, local_search,
                     stirling)

__version__ = "0.1.0"

__all__ = [
    "BlockDiagnostics", "BlockImage", "BlockType", "BlockView", "BlockmodelError", "DataError",
    "Evaluation", "FixtureUnavailable", "Network", "NotApplicableError", "Partition",
    "PointBiserialParts", "QapResult", "ResultDocument", "SearchLimitExceeded", "SearchParams",
    "Solution", "SolutionPool", "SolutionRecord", "TripletList", "UndefinedCriterionError",
    "block_penalty", "block_view", "blockmodel_triplets", "build_network", "count_optima",
    "enumerate_blockimages", "enumerate_partitions", "evaluate", "exhaustive_search",
    "expand_ensemble", "fixture_status", "format_partition", "load_fixture", "local_search",
    "make_partition", "parse_blockimage", "parse_network", "parse_partition", "penalty",
    "per_block_best_penalty", "point_biserial", "qap_test", "register_fixture",
    "render_blockmodel", "stirling", "triplets_for", "weighted_correlation",
]
