"""
File-backed storage for experiment results.

Summary documents are the JSON form of ExperimentResult; convergence traces
are one CSV file per run. Nothing time- or host-dependent is written, so the
same configuration always produces byte-identical files.
"""

import csv
import io
import os
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pydantic import TypeAdapter

from .models import ExperimentResult, Table2Row

import logging
logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]

TABLE2_COLUMNS = [
    "function", "type", "algorithm", "clone_set", "mutation",
    "mean_proximity", "mean_iterations", "convergence_rate",
]


class ResultsWriteError(OSError):
    """An output file could not be written or read; carries the path."""

    def __init__(self, path: PathLike, cause: BaseException):
        super().__init__(f"Failed to access '{path}': {cause}")
        self.path = str(path)
        self.cause = cause


def trace_filename(function: str, algorithm: str, cell_index: int, run_index: int) -> str:
    return f"{function}-{algorithm}-cell{cell_index:02d}-run{run_index:02d}.csv"


def table2_to_csv(rows: Iterable[Table2Row]) -> str:
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=TABLE2_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({
            "function": row.function,
            "type": row.type,
            "algorithm": row.algorithm.value,
            "clone_set": row.clone_set,
            "mutation": row.mutation,
            "mean_proximity": repr(row.mean_proximity),
            "mean_iterations": repr(row.mean_iterations),
            "convergence_rate": repr(row.convergence_rate),
        })
    return output.getvalue()


def table2_to_json(rows: Iterable[Table2Row]) -> str:
    adapter = TypeAdapter(List[Table2Row])
    return adapter.dump_json(list(rows), indent=2).decode("utf-8") + "\n"


class ResultsStore:
    """Reads and writes summary documents and trace CSVs."""

    def _write_text(self, path: Path, text: str) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            raise ResultsWriteError(path, e) from e
        return path

    def write_text(self, path: PathLike, text: str) -> Path:
        return self._write_text(Path(path), text)

    def write_summary(self, result: ExperimentResult, path: PathLike) -> Path:
        written = self._write_text(Path(path), summary_to_json(result))
        logger.info(f"Wrote summary with {len(result.cells)} cell(s) to {written}")
        return written

    def write_traces(self, result: ExperimentResult, trace_dir: PathLike) -> List[Path]:
        directory = Path(trace_dir)
        written: List[Path] = []
        for cell in result.cells:
            for run in cell.runs:
                if run.trace is None:
                    logger.warning(
                        f"No trace kept for cell {cell.cell_index} run {run.run_index}; "
                        f"set keep_traces to write trace files"
                    )
                    continue
                name = trace_filename(
                    result.config.function, cell.parameters.algorithm.value, cell.cell_index, run.run_index
                )
                written.append(self._write_text(directory / name, run.trace.to_csv()))
        logger.info(f"Wrote {len(written)} trace file(s) to {directory}")
        return written

    def read_summary(self, path: PathLike) -> ExperimentResult:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ResultsWriteError(path, e) from e
        return ExperimentResult.model_validate_json(text)


def summary_to_json(result: ExperimentResult) -> str:
    return result.model_dump_json(indent=2) + "\n"


# Global store instance
_store: Optional[ResultsStore] = None


def get_results_store() -> ResultsStore:
    global _store
    if not _store:
        _store = ResultsStore()
    return _store


def write_results(
    result: ExperimentResult,
    out_path: Optional[PathLike] = None,
    trace_dir: Optional[PathLike] = None,
) -> List[Path]:
    """Write the summary document and, if trace_dir is given, per-run trace CSVs."""
    store = get_results_store()
    written: List[Path] = []
    if out_path is not None:
        written.append(store.write_summary(result, out_path))
    if trace_dir is not None:
        written.extend(store.write_traces(result, trace_dir))
    return written


def read_results(path: PathLike) -> ExperimentResult:
    return get_results_store().read_summary(path)
