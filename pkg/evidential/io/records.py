import csv
import io
from pathlib import Path
from typing import List, Mapping, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ValidationError, model_validator

from evidential.algebra.frames import Variable
from evidential.core.exceptions import InvalidModelError, ParseError
from evidential.core.logging_config import get_logger

logger = get_logger(__name__)


class RecordTable(BaseModel):
    """Complete observations: one value per header column in every row.

    ``lines`` keeps the source line of each row for error messages.
    """

    header: List[str]
    rows: List[Tuple[str, ...]] = []
    lines: List[int] = []

    @model_validator(mode="after")
    def check_shape(self) -> "RecordTable":
        if not self.header or any(not name for name in self.header):
            raise ValueError("record header is empty")
        if len(set(self.header)) != len(self.header):
            raise ValueError(f"duplicate column in header {self.header}")
        if not self.lines:
            self.lines = list(range(2, len(self.rows) + 2))
        return self

    def validate_domains(self, variables: Mapping[str, Variable]) -> None:
        for row, line in zip(self.rows, self.lines):
            for column, value in zip(self.header, row):
                variable = variables.get(column)
                if variable is not None and value not in variable.domain:
                    raise InvalidModelError(
                        f"line {line}, column {column}: value '{value}' not in "
                        f"domain {list(variable.domain)}"
                    )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.header, dtype=str)


def parse_records(
    text: str, variables: Optional[Mapping[str, Variable]] = None
) -> RecordTable:
    header: Optional[List[str]] = None
    rows: List[Tuple[str, ...]] = []
    lines: List[int] = []
    reader = csv.reader(io.StringIO(text))
    for cells in reader:
        line = reader.line_num
        cells = [cell.strip() for cell in cells]
        if not any(cells) or cells[0].startswith("#"):
            continue
        if header is None:
            header = cells
            continue
        if len(cells) != len(header):
            raise ParseError(
                f"row has {len(cells)} cells, header has {len(header)}", line=line
            )
        if any(not cell for cell in cells):
            raise ParseError("row has a missing value", line=line)
        rows.append(tuple(cells))
        lines.append(line)
    if header is None:
        raise ParseError("record file has no header row")
    try:
        table = RecordTable(header=header, rows=rows, lines=lines)
    except ValidationError as e:
        raise ParseError(e.errors()[0]["msg"]) from None
    if variables is not None:
        table.validate_domains(variables)
    return table


def load_records(
    path: Union[str, Path],
    variables: Optional[Union[Mapping[str, Variable], List[Variable]]] = None,
) -> RecordTable:
    if variables is not None and not isinstance(variables, Mapping):
        variables = {v.name: v for v in variables}
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidModelError(f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 text (byte {e.start})") from None
    table = parse_records(text, variables)
    logger.info(f"read {len(table.rows)} records over {table.header} from {path}")
    return table
