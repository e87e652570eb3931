"""Succinct encodings of an integer array for range-min/max and nearest smaller/larger value queries."""
from .bitseq import BitSeq
from .bp import ParenSeq
from .cheap_query import HeapEncoding
from .combined import VARIANTS, CombinedEncoding, encode, f, fprime
from .dfuds import DfudsTree
from .oracle import KINDS, QuerySpec, oracle_answer

__all__ = ["BitSeq", "ParenSeq", "DfudsTree", "HeapEncoding", "CombinedEncoding", "encode",
           "f", "fprime", "QuerySpec", "oracle_answer", "KINDS", "VARIANTS"]
__version__ = "0.1.0"
