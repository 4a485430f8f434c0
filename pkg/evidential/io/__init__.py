from evidential.io.documents import (
    NetworkDocument,
    dumps_network,
    load_network,
    load_structure,
    loads_network,
    save_network,
)
from evidential.io.estimation import estimate_valuations
from evidential.io.records import RecordTable, load_records, parse_records

__all__ = [
    "NetworkDocument",
    "RecordTable",
    "dumps_network",
    "estimate_valuations",
    "load_network",
    "load_records",
    "load_structure",
    "loads_network",
    "parse_records",
    "save_network",
]
