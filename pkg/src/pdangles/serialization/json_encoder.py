# this_file: src/pdangles/serialization/json_encoder.py
"""JSON encoder for numeric reports."""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger


class ReportJSONEncoder(json.JSONEncoder):
    """JSON encoder that understands numpy values and never emits NaN or Infinity."""

    def encode(self, o: Any) -> str:
        """Encode object to JSON string."""
        return super().encode(self._preprocess(o))

    def iterencode(self, o: Any, _one_shot: bool = False):
        """Encode object to JSON string iteratively."""
        return super().iterencode(self._preprocess(o), _one_shot)

    def _preprocess(self, obj: Any) -> Any:
        """Convert numpy containers and replace non-finite floats with null."""
        if isinstance(obj, np.ndarray):
            return [self._preprocess(item) for item in obj.tolist()]
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, (float, np.floating)):
            value = float(obj)
            if not math.isfinite(value):
                logger.warning(f"Converting non-finite value {value} to null")
                return None
            return value
        if isinstance(obj, dict):
            return {str(k): self._preprocess(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self._preprocess(item) for item in obj]
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, Path):
            return str(obj)
        return obj
