"""
System file loading utilities
"""
import json
import logging
from pathlib import Path
from typing import Mapping, Optional, Tuple, Union

from pydantic import ValidationError

from polylift.errors import DocumentError
from polylift.models.dsl import parse_dsl
from polylift.models.ode import PolyODE
from polylift.models.schemas import SystemDocument

logger = logging.getLogger(__name__)

JSON_SUFFIXES = {".json"}


class SystemLoader:
    """Reads polynomial systems from JSON documents or DSL text"""

    @staticmethod
    def detect_format(name: str, text: str) -> str:
        """'json' for .json files or text starting with '{', otherwise 'dsl'"""
        if Path(name).suffix.lower() in JSON_SUFFIXES or text.lstrip().startswith("{"):
            return "json"
        return "dsl"

    @staticmethod
    def from_json_text(text: str) -> PolyODE:
        try:
            document = SystemDocument.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise DocumentError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
        except ValidationError as e:
            raise DocumentError(f"invalid system document: {e.errors()[0]['msg']}") from e
        return document.to_ode()

    @staticmethod
    def from_text(
        text: str,
        name: str = "<input>",
        overrides: Optional[Mapping[str, float]] = None,
    ) -> Tuple[PolyODE, dict]:
        """
        Load a system from text in either format

        Args:
            text: File contents
            name: File name, used for format detection and logging
            overrides: DSL parameter values

        Returns:
            (system, parameter bindings used)
        """
        fmt = SystemLoader.detect_format(name, text)
        if fmt == "json":
            if overrides:
                raise DocumentError(
                    f"{name} is a JSON document and declares no parameters: {', '.join(sorted(overrides))}"
                )
            ode, params = SystemLoader.from_json_text(text), {}
        else:
            parsed = parse_dsl(text, overrides)
            ode, params = parsed.compile(), parsed.params
        logger.info(f"✅ Loaded {name} ({fmt}): n={ode.n}, k={ode.k}")
        return ode, params

    @staticmethod
    def from_path(
        path: Union[str, Path],
        overrides: Optional[Mapping[str, float]] = None,
    ) -> Tuple[PolyODE, dict]:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DocumentError(f"cannot read {path}: {e.strerror}") from e
        return SystemLoader.from_text(text, name=path.name, overrides=overrides)
