"""
JSON interchange for pseudoform

Complex files are `{"name": <string?>, "dim": <int>, "facets": [[int, ...], ...]}`.
Facets may arrive unsorted and are written sorted. Traces are TraceNode trees.
All encoding and decoding goes through pydantic.
"""

import logging
import os
from typing import List, Optional

from pydantic import BaseModel, field_validator, model_validator

from ..core.complex import SimplicialComplex, make_face

logger = logging.getLogger(__name__)


class ComplexFile(BaseModel):
    name: Optional[str] = None
    dim: int
    facets: List[List[int]]

    @field_validator("facets")
    @classmethod
    def _canonical_facets(cls, facets: List[List[int]]) -> List[List[int]]:
        return [list(face) for face in sorted({make_face(f) for f in facets if f})]

    @model_validator(mode="after")
    def _check_dim(self) -> "ComplexFile":
        actual = max((len(f) - 1 for f in self.facets), default=-1)
        if actual != self.dim:
            raise ValueError(f"Declared dim {self.dim} does not match the facets (dim {actual})")
        return self

    @classmethod
    def from_complex(cls, K: SimplicialComplex, name: Optional[str] = None) -> "ComplexFile":
        return cls(name=name or K.name, dim=K.dim, facets=K.facet_list())

    def to_complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(self.facets, name=self.name)


def to_json(K: SimplicialComplex, name: Optional[str] = None) -> str:
    return ComplexFile.from_complex(K, name).model_dump_json()


def from_json(text: str) -> SimplicialComplex:
    return ComplexFile.model_validate_json(text).to_complex()


def canonical_form(K: SimplicialComplex) -> List[List[int]]:
    """Sorted facet list; equal for complexes with equal facet sets."""
    return K.facet_list()


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_model(path: str, model: BaseModel, indent: Optional[int] = None) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(model.model_dump_json(indent=indent))
    logger.debug(f"Wrote {type(model).__name__} to {path}")


def load_complex(path: str) -> SimplicialComplex:
    """
    Read a complex file.

    Args:
        path: Path to the JSON complex file

    Returns:
        The complex, named after the file's `name` field

    Raises:
        OSError: if the file cannot be read
        pydantic.ValidationError: if the content is not a valid complex file
    """
    with open(path, encoding="utf-8") as f:
        return from_json(f.read())


def save_complex(path: str, K: SimplicialComplex, name: Optional[str] = None) -> None:
    write_model(path, ComplexFile.from_complex(K, name))


def load_trace(path: str):
    from ..operations.decomposition import TraceNode

    with open(path, encoding="utf-8") as f:
        return TraceNode.model_validate_json(f.read())
