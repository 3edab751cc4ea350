"""
Export Service
Writes trajectories, event logs, sweep tables, nullcline curves and
reports as CSV and JSON
"""
import csv
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from core.filippov import Trajectory
from .analysis import NullclinePoint
from .sweep import BifurcationRow

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ["t", "A", "eta", "mode"]
SWEEP_HEADER = ["eta_c", "attractor", "A_c", "lambda_re_max", "period", "eta_min", "eta_max", "reason"]
NULLCLINE_HEADER = ["eta", "A", "stability_branch"]
PARTIAL_SUFFIX = ".partial"


class ExportFormat(Enum):
    """Supported export formats"""
    CSV = "csv"
    JSON = "json"


@dataclass
class ExportResult:
    """Result of an export operation"""
    success: bool
    format: str
    path: Optional[str] = None
    paths: Optional[List[str]] = None
    error: Optional[str] = None


def format_number(value: Optional[float]) -> str:
    """17 significant digits so doubles read back exactly; None is blank"""
    if value is None:
        return ""
    return format(float(value), ".17g")


class ExportService:
    """
    Service for writing run artifacts next to an output prefix

    `prefix` "runs/small_cap" gives runs/small_cap.csv, runs/small_cap.events.json and
    so on; the parent directory is created on demand.
    """

    def __init__(self, prefix: Union[str, Path]):
        """
        Args:
            prefix: Output path without extension
        """
        self.prefix = Path(prefix)

    def _path(self, suffix: str, partial: bool = False) -> Path:
        path = self.prefix.with_name(self.prefix.name + suffix + (PARTIAL_SUFFIX if partial else ""))
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @staticmethod
    def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)

    @staticmethod
    def _write_json(path: Path, data: Any) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2)
            f.write("\n")

    def export_trajectory(self, trajectory: Trajectory, partial: bool = False) -> ExportResult:
        """
        Trajectory CSV (t,A,eta,mode) plus the events JSON sidecar

        With `partial` both files get a .partial suffix.
        """
        try:
            csv_path = self._path(".csv", partial)
            events_path = self._path(".events.json", partial)
            self._write_csv(csv_path, TRAJECTORY_HEADER, (
                [format_number(s.t), format_number(s.x), format_number(s.y), s.mode.value]
                for s in trajectory.samples
            ))
            self._write_json(events_path, [e.to_dict() for e in trajectory.events])
            logger.info("Wrote %d samples to %s", len(trajectory.samples), csv_path)
            return ExportResult(
                success=True, format=ExportFormat.CSV.value,
                path=str(csv_path), paths=[str(csv_path), str(events_path)]
            )
        except OSError as e:
            return ExportResult(success=False, format=ExportFormat.CSV.value, error=str(e))

    def export_sweep(self, rows: Sequence[BifurcationRow]) -> ExportResult:
        """Bifurcation table; blank fields where a column does not apply"""
        try:
            path = self._path(".csv")
            self._write_csv(path, SWEEP_HEADER, (self._sweep_fields(row) for row in rows))
            logger.info("Wrote %d sweep rows to %s", len(rows), path)
            return ExportResult(success=True, format=ExportFormat.CSV.value, path=str(path))
        except OSError as e:
            return ExportResult(success=False, format=ExportFormat.CSV.value, error=str(e))

    @staticmethod
    def _sweep_fields(row: BifurcationRow) -> List[str]:
        data = row.to_dict()
        fields = []
        for key in SWEEP_HEADER:
            value = data[key]
            if key in ("attractor", "reason"):
                fields.append(value or "")
            else:
                fields.append(format_number(value))
        return fields

    def export_nullcline(self, points: Sequence[NullclinePoint]) -> ExportResult:
        try:
            path = self._path(".csv")
            self._write_csv(path, NULLCLINE_HEADER, (
                [format_number(p.eta), format_number(p.A), p.stability_branch] for p in points
            ))
            return ExportResult(success=True, format=ExportFormat.CSV.value, path=str(path))
        except OSError as e:
            return ExportResult(success=False, format=ExportFormat.CSV.value, error=str(e))

    def export_report(self, report: Dict[str, Any], suffix: str = ".json") -> ExportResult:
        """Any report already turned into a dict"""
        try:
            path = self._path(suffix)
            self._write_json(path, report)
            return ExportResult(success=True, format=ExportFormat.JSON.value, path=str(path))
        except OSError as e:
            return ExportResult(success=False, format=ExportFormat.JSON.value, error=str(e))
