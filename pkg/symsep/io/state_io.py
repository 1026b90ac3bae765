"""
JSON import/export of density matrices and POVMs.

State format:
    {"dims": [3, 3], "matrix": [[re, im], ...], "label": "optional"}

``matrix`` lists the dim x dim entries in row-major order, each as a
[real, imaginary] pair. A nested list of rows of pairs is also accepted on
import.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from symsep.errors import StateFormatError, SymsepError
from symsep.measurement.povm import SymmetricPovm
from symsep.models.state import DensityMatrix


class StatePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: list[int] = Field(min_length=1)
    matrix: list[Any]
    label: str | None = Field(default=None)

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, value: list[int]) -> list[int]:
        if any(d < 1 for d in value):
            raise ValueError(f"dims must be positive, got {value}")
        return value

    def to_array(self) -> np.ndarray:
        dim = int(np.prod(self.dims))
        entries = self.matrix
        if entries and isinstance(entries[0], list) and entries[0] and isinstance(entries[0][0], list):
            entries = [pair for row in entries for pair in row]
        pairs = np.asarray(entries, dtype=float)
        if pairs.shape != (dim * dim, 2):
            raise ValueError(f"matrix must hold {dim * dim} [re, im] pairs for dims {self.dims}, got shape {pairs.shape}")
        return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)


def state_to_payload(rho: DensityMatrix) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "dims": list(rho.dims),
        "matrix": [[float(value.real), float(value.imag)] for value in rho.matrix.ravel()],
    }
    if rho.label is not None:
        payload["label"] = rho.label
    return payload


def parse_state(payload: Any) -> DensityMatrix:
    """
    Validate a decoded JSON payload into a DensityMatrix.

    Raises:
        StateFormatError: On schema violations or if the matrix is not a state.
    """
    try:
        model = StatePayload.model_validate(payload)
        matrix = model.to_array()
    except (ValidationError, ValueError) as exc:
        raise StateFormatError(f"Invalid state payload: {exc}") from exc
    try:
        return DensityMatrix(matrix, tuple(model.dims), model.label)
    except SymsepError as exc:
        raise StateFormatError(f"Payload is not a density matrix: {exc}") from exc


def load_state(path: Path) -> DensityMatrix:
    if not path.exists():
        raise StateFormatError(f"State file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"Invalid JSON in {path.name}: {exc}") from exc
    return parse_state(payload)


def dump_state(path: Path, rho: DensityMatrix) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(state_to_payload(rho), ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def dump_povm(path: Path, povm: SymmetricPovm) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(povm.to_payload(), ensure_ascii=False) + "\n", encoding="utf-8")
    return path
