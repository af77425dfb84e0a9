import json
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import yaml

from models.entities import HermitianMatrix
from models.errors import AsymmetricMatrix, MatrixFormatError, SpecParseError
from models.probes import ClaimDefinition
from views.common import get_logger

ASYMMETRY_TOL_REL = 1e-9

logger = get_logger("MatrixIO")


class JsonMatrixLoader:
    """
    Reads {"dim": d, "rows": [[...], ...]}. The {"matrix": rows} object
    written by `compute` is accepted too, so outputs can be fed back in.
    """

    def load(self, json_file: Path) -> HermitianMatrix:
        json_file = Path(json_file)
        logger.info(f"Loading matrix from: {json_file}")

        if not json_file.exists():
            logger.error(f"File not found: {json_file}")
            raise FileNotFoundError(f"File not found: {json_file}")

        try:
            with open(json_file, 'r', encoding='utf-8') as f:
                raw_data = json.load(f)
        except json.JSONDecodeError as e:
            logger.exception("Failed to parse JSON file")
            raise MatrixFormatError(f"{json_file} is not valid JSON: {e}") from e

        return self.parse(raw_data, source=str(json_file))

    def parse(self, raw_data: Any, source: str = "<memory>") -> HermitianMatrix:
        if not isinstance(raw_data, dict):
            raise MatrixFormatError(f"{source}: expected a JSON object, got {type(raw_data).__name__}")

        rows = raw_data.get('rows', raw_data.get('matrix'))
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise MatrixFormatError(f"{source}: 'rows' must be a nonempty list of lists")

        try:
            grid = np.array(rows, dtype=float)
        except (TypeError, ValueError) as e:
            raise MatrixFormatError(f"{source}: rows must hold numbers of equal length") from e

        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise MatrixFormatError(f"{source}: matrix must be square, got shape {grid.shape}")
        declared = raw_data.get('dim')
        if declared is not None and declared != grid.shape[0]:
            raise MatrixFormatError(f"{source}: declared dim {declared} but found {grid.shape[0]} rows")
        if not np.all(np.isfinite(grid)):
            raise MatrixFormatError(f"{source}: entries must be finite")

        asymmetry = float(np.max(np.abs(grid - grid.T)))
        limit = ASYMMETRY_TOL_REL * max(1.0, float(np.linalg.norm(grid, 2)))
        if asymmetry > limit:
            logger.error(f"{source}: asymmetry {asymmetry!r} exceeds {limit!r}")
            raise AsymmetricMatrix(f"{source}: max |M - M^T| = {asymmetry!r} exceeds {limit!r}")

        logger.debug(f"{source}: {grid.shape[0]}x{grid.shape[0]} matrix")
        return HermitianMatrix(entries=grid)


class YamlClaimLoader:
    def load(self, yaml_file: Path) -> List[ClaimDefinition]:
        yaml_file = Path(yaml_file)
        logger.info(f"Loading claim registry from: {yaml_file}")

        if not yaml_file.exists():
            logger.error(f"File not found: {yaml_file}")
            raise FileNotFoundError(f"File not found: {yaml_file}")

        try:
            with open(yaml_file, 'r', encoding='utf-8') as f:
                raw_data = yaml.safe_load(f) or {}
        except Exception as e:
            logger.exception("Failed to parse YAML file")
            raise e

        raw_claims = raw_data.get('claims', [])
        if not isinstance(raw_claims, list):
            raise SpecParseError(f"{yaml_file}: 'claims' must be a list, got {type(raw_claims).__name__}")

        claims: List[ClaimDefinition] = []
        seen: Dict[str, int] = {}
        for i, c_data in enumerate(raw_claims):
            try:
                claim = ClaimDefinition(**c_data)
            except Exception as e:
                logger.error(f"Failed to parse claim index {i}: {c_data.get('id', 'Unknown') if isinstance(c_data, dict) else c_data}")
                logger.exception(e)
                raise e
            if claim.id in seen:
                raise SpecParseError(f"Duplicate claim id '{claim.id}' at index {i} (first at {seen[claim.id]})")
            seen[claim.id] = i
            claims.append(claim)

        logger.info(f"Successfully loaded {len(claims)} claims")
        return claims
