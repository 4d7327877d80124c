"""corpusforge: MediaWiki XML dumps to cleaned, deduplicated corpora.

The pipeline stages are importable individually (ingest, cleaning,
encode, cluster, dedup, stats) or orchestrated end to end via
pipeline.run / the corpusforge CLI.
"""

from .cleaning import clean_article, clean_stream
from .cluster import bucket_by_category
from .config import CleanConfig, PipelineConfig, SectionPolicy, TagPolicy
from .dedup import (MinHashSignature, compute_signatures, minhash,
                    prune_corpus, score_buckets, signature_similarity,
                    trigram_set)
from .encode import Vocabulary, build_vocabulary, encode_article, tokenize
from .errors import (AbsentProjectError, ConfigError, ConsistencyError,
                     CorpusForgeError, DumpParseError, FetchError,
                     IntegrityError, StageError)
from .ingest import fetch_dump, iter_pages, parse_dump, serialize_pages
from .knee import find_knee
from .records import (Bucket, CleanArticle, DumpDescriptor, EncodedArticle,
                      IngestStats, KneeResult, RawPage, SimilarityRecord)
from .stats import FreqProfile, cosine_delta, profile, report

__version__ = "0.1.0"

__all__ = [
    "AbsentProjectError", "Bucket", "CleanArticle", "CleanConfig",
    "ConfigError", "ConsistencyError", "CorpusForgeError", "DumpDescriptor",
    "DumpParseError", "EncodedArticle", "FetchError", "FreqProfile",
    "IngestStats", "IntegrityError", "KneeResult", "MinHashSignature",
    "PipelineConfig", "RawPage", "SectionPolicy", "SimilarityRecord",
    "StageError", "TagPolicy", "Vocabulary", "bucket_by_category",
    "build_vocabulary", "clean_article", "clean_stream",
    "compute_signatures", "cosine_delta", "encode_article", "fetch_dump",
    "find_knee", "iter_pages", "minhash", "parse_dump", "profile",
    "prune_corpus", "report", "score_buckets", "serialize_pages",
    "signature_similarity", "tokenize", "trigram_set",
]
