"""News-to-literature linking engine."""

__version__ = "1.0.0"

from .Config import DecayConfig, SearchConfig, load_search_config
from .Corpus import NewsArticle, PaperRecord, parse_paper_record
from .Engine import LinkEngine, LinkRequest, LinkResponse
from .Errors import EmptyQueryError, InputError, LinkerError
from .Index import Field, Index, build_index, load_snapshot, save_snapshot
from .Ranking import Query, RankedHit, brute_force_search, search

__all__ = [
    "__version__",
    "DecayConfig",
    "SearchConfig",
    "load_search_config",
    "NewsArticle",
    "PaperRecord",
    "parse_paper_record",
    "LinkEngine",
    "LinkRequest",
    "LinkResponse",
    "EmptyQueryError",
    "InputError",
    "LinkerError",
    "Field",
    "Index",
    "build_index",
    "load_snapshot",
    "save_snapshot",
    "Query",
    "RankedHit",
    "brute_force_search",
    "search",
]
