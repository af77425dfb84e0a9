import csv
import io
import json
import math
from typing import Any, Iterable, List

from models.entities import HermitianMatrix, SystemConfig
from models.probes import ProbeReport, RegionCell


def format_float(value: float) -> str:
    """17 significant digits: round-trip exact for 64-bit floats"""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, f".{SystemConfig.OUTPUT_DIGITS}g")


def dumps_exact(value: Any) -> str:
    """json.dumps, except every float is printed with 17 significant digits"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        items = (f"{json.dumps(str(k))}: {dumps_exact(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(dumps_exact(v) for v in value) + "]"
    raise TypeError(f"Cannot serialize {type(value).__name__}")


class ReportProjector:
    @staticmethod
    def report_to_json(report: ProbeReport) -> str:
        return dumps_exact(report.model_dump(mode="json"))

    @staticmethod
    def matrix_result_to_json(matrix: HermitianMatrix, min_eigenvalue: float) -> str:
        return dumps_exact({
            "matrix": matrix.rows(),
            "trace": matrix.trace(),
            "min_eigenvalue": float(min_eigenvalue),
        })

    @staticmethod
    def identity_to_json(lhs: float, rhs: float, residual: float) -> str:
        return dumps_exact({"lhs": float(lhs), "rhs": float(rhs), "residual": float(residual)})

    @staticmethod
    def selftest_to_json(passed: bool, rows: List[dict]) -> str:
        return dumps_exact({"passed": passed, "claims": rows})


class ScanProjector:
    HEADER = ["alpha", "beta", "verdict", "worst_convex_margin", "worst_concave_margin"]

    @classmethod
    def to_csv(cls, cells: Iterable[RegionCell]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(cls.HEADER)
        for cell in cells:
            writer.writerow([
                format_float(cell.alpha),
                format_float(cell.beta),
                cell.verdict.value,
                format_float(cell.worst_convex_margin),
                format_float(cell.worst_concave_margin),
            ])
        return buffer.getvalue()
