"""CSV fixture loading for the fidelity, marginal, scan and coincidence tables."""

import re
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import ValidationError

from quantum_witness.config import get_settings
from quantum_witness.errors import FixtureSchemaError
from quantum_witness.experiment.models import (
    CoincidenceRecord,
    FidelityRecord,
    MarginalRecord,
    ScanRecord,
)
from quantum_witness.utils.logger import get_logger

logger = get_logger(__name__)

FixtureKind = Literal["table1", "table2", "table3", "table4"]

SCHEMAS: dict[str, tuple[str, ...]] = {
    "table1": ("theta_deg", "two_qubit", "one_qubit"),
    "table2": ("theta_deg", "a_basis", "b_basis", "a0", "a1", "b0", "b1"),
    "table3": ("theta_deg", "phi_deg", "a0", "a1"),
    "table4": ("x", "y", "a", "b"),
}
TEXT_COLUMNS = {"a_basis", "b_basis"}
THETA_COLUMN = re.compile(r"^theta_deg_(\d+(?:\.\d+)?)$")

# pandas row 0 sits on file line 2, after the header.
HEADER_OFFSET = 2

Record = FidelityRecord | MarginalRecord | ScanRecord | CoincidenceRecord


def fixture_path(kind: FixtureKind, fixtures_dir: str | Path | None = None) -> Path:
    settings = get_settings()
    directory = settings.resolve_path(str(fixtures_dir or settings.fixtures_dir))
    return directory / f"{kind}.csv"


def _read(path: Path, kind: str) -> pd.DataFrame:
    if not path.exists():
        raise FileNotFoundError(f"fixture not found at {path}")
    try:
        frame = pd.read_csv(path, encoding="utf-8", skipinitialspace=True)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise FixtureSchemaError(f"{path.name} is not a readable CSV: {e}") from e

    missing = [c for c in SCHEMAS[kind] if c not in frame.columns]
    if missing:
        raise FixtureSchemaError(f"{path.name} is missing required columns", line=1, column=missing[0])

    for column in frame.columns:
        if column in TEXT_COLUMNS:
            continue
        numeric = pd.to_numeric(frame[column], errors="coerce")
        bad = numeric.isna()
        if bad.any():
            row = int(bad.to_numpy().nonzero()[0][0])
            raise FixtureSchemaError(f"{path.name} has a non-numeric value", line=row + HEADER_OFFSET, column=column)
        frame[column] = numeric
    return frame


def _theta_columns(frame: pd.DataFrame, path: Path) -> dict[str, float]:
    columns = {c: float(m.group(1)) for c in frame.columns if (m := THETA_COLUMN.match(c))}
    if not columns:
        raise FixtureSchemaError(f"{path.name} has no theta_deg_<angle> count columns", line=1)
    return columns


def _records(frame: pd.DataFrame, kind: str, path: Path) -> list[Record]:
    records: list[Record] = []
    thetas = _theta_columns(frame, path) if kind == "table4" else {}
    for index, row in enumerate(frame.itertuples(index=False)):
        line = index + HEADER_OFFSET
        values = row._asdict()
        try:
            if kind == "table1":
                records.append(FidelityRecord(**values))
            elif kind == "table2":
                context = f"{values['a_basis']}|{values['b_basis']}"
                for party, basis in (("a", values["a_basis"]), ("b", values["b_basis"])):
                    records.append(
                        MarginalRecord(
                            theta_deg=values["theta_deg"],
                            context=f"{context}:{basis}",
                            party=party,
                            raw=(values[f"{party}0"], values[f"{party}1"]),
                        )
                    )
            elif kind == "table3":
                marginal = MarginalRecord(
                    theta_deg=values["theta_deg"],
                    context=f"phi={values['phi_deg']:g}",
                    raw=(values["a0"], values["a1"]),
                )
                records.append(ScanRecord(theta_deg=values["theta_deg"], phi_deg=values["phi_deg"], marginal=marginal))
            else:
                for column, theta in thetas.items():
                    count = values[column]
                    if count != int(count):
                        raise FixtureSchemaError("coincidence counts must be integers", line=line, column=column)
                    records.append(
                        CoincidenceRecord(
                            theta_deg=theta,
                            x=int(values["x"]),
                            y=int(values["y"]),
                            a=int(values["a"]),
                            b=int(values["b"]),
                            count=int(count),
                        )
                    )
        except ValidationError as e:
            error = e.errors()[0]
            column = str(error["loc"][0]) if error["loc"] else None
            raise FixtureSchemaError(f"{path.name}: {error['msg']}", line=line, column=column) from e
    return records


def load_fixture(path: str | Path, kind: FixtureKind) -> list[Record]:
    """Load and validate one table fixture.

    Marginal rows are renormalized pairwise with the raw values kept on the
    record; rows too far from normalized are flagged, never corrected.
    """
    if kind not in SCHEMAS:
        raise ValueError(f"unknown fixture kind '{kind}', expected one of {sorted(SCHEMAS)}")
    path = Path(path)
    records = _records(_read(path, kind), kind, path)
    for record in records:
        marginal = record.marginal if isinstance(record, ScanRecord) else record
        if isinstance(marginal, MarginalRecord) and not marginal.consistent:
            logger.warning(
                "row_inconsistent",
                fixture=path.name,
                theta_deg=marginal.theta_deg,
                context=marginal.context,
                raw_sum=round(sum(marginal.raw), 6),
            )
    logger.debug("fixture_loaded", fixture=path.name, kind=kind, records=len(records))
    return records
