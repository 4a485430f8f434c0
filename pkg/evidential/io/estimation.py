from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from evidential.algebra.frames import Variable
from evidential.core.exceptions import InvalidModelError
from evidential.core.logging_config import get_logger
from evidential.io.records import RecordTable
from evidential.network.dag import Dag
from evidential.network.valuation import NodeValuation, parent_configurations

logger = get_logger(__name__)


def _observed_variables(records: RecordTable, names: Sequence[str]) -> Dict[str, Variable]:
    frame = records.to_frame()
    return {
        name: Variable(name, tuple(sorted(frame[name].unique()))) for name in names
    }


def _counts(frame, columns: List[str]) -> Dict[Tuple[str, ...], int]:
    sizes = frame.groupby(columns, sort=True).size().to_dict()
    return {
        (key if isinstance(key, tuple) else (key,)): int(count)
        for key, count in sizes.items()
    }


def estimate_valuations(
    dag: Dag,
    records: RecordTable,
    smoothing: float = 0.0,
    variables: Optional[Union[Mapping[str, Variable], Sequence[Variable]]] = None,
) -> List[NodeValuation]:
    """Conditional tables by relative frequency.

    P(x | cfg) = (count(x, cfg) + s) / (count(cfg) + s * |domain|). A parent
    configuration never observed with ``s == 0`` gets the uniform row.
    Without ``variables`` each domain is the sorted set of observed values.
    """
    if smoothing < 0:
        raise InvalidModelError(f"smoothing {smoothing} is negative")
    if not records.rows:
        raise InvalidModelError("record table is empty")
    missing = sorted(set(dag.nodes) - set(records.header))
    if missing:
        raise InvalidModelError(f"records lack column(s) for node(s) {missing}")
    if variables is None:
        variables = _observed_variables(records, dag.nodes)
    elif not isinstance(variables, Mapping):
        variables = {v.name: v for v in variables}
    records.validate_domains(variables)

    frame = records.to_frame()
    valuations = []
    for node in dag.nodes:
        parents = dag.parents(node)
        domain = variables[node].domain
        counts = _counts(frame, [*parents, node])
        table = {}
        for key in parent_configurations(parents, variables):
            hits = [counts.get(key + (value,), 0) for value in domain]
            denominator = sum(hits) + smoothing * len(domain)
            if denominator == 0:
                logger.warning(
                    f"estimating {node}: parent configuration {key} never observed; "
                    "using the uniform distribution"
                )
                table[key] = tuple(1.0 / len(domain) for _ in domain)
            else:
                table[key] = tuple((c + smoothing) / denominator for c in hits)
        valuations.append(NodeValuation.probabilistic(node, parents, table))
    logger.info(
        f"estimated {len(valuations)} valuations from {len(records.rows)} records"
    )
    return valuations
