"""Shared state and argument parsing helpers for the subcommands."""

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, TextIO

import pandas as pd

from src.lib.algebra import TernaryElement
from src.lib.element_io import load_element
from src.lib.hilbert_scale import IDENTITY_WEIGHTS, WeightProfile
from src.lib.scalars import EXACT, FLOAT, CoefficientField, FloatField
from src.utils.config import EngineConfig

CSV_SEPARATOR = "\t"
CSV_FLOAT_FORMAT = "%.17g"


@dataclass
class CommandContext:
    """
    Everything a subcommand needs besides its own flags.

    Attributes:
        config: Effective configuration (file values with flags applied)
        field: Coefficient field selected by --float
        stdout: Result stream
        stderr: Diagnostic stream
        logger: Application logger
    """

    config: EngineConfig
    field: CoefficientField
    stdout: TextIO
    stderr: TextIO
    logger: logging.Logger

    def load_element(self, source: str) -> TernaryElement:
        """Element from text, record JSON or '@path' in the selected field."""
        return load_element(source, self.field, self.config.inverse_floor)

    def emit(self, text: str) -> None:
        self.stdout.write(text if text.endswith("\n") else text + "\n")

    def write_frame(self, frame: pd.DataFrame, out: Optional[str]) -> None:
        """Tab-separated CSV with 17 significant digits, to --out or stdout."""
        if out:
            with Path(out).open("w", encoding="utf-8", newline="") as handle:
                frame.to_csv(handle, sep=CSV_SEPARATOR, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        else:
            frame.to_csv(self.stdout, sep=CSV_SEPARATOR, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def select_field(use_float: bool, config: EngineConfig) -> CoefficientField:
    if not use_float:
        return EXACT
    if config.float_threshold == FLOAT.threshold:
        return FLOAT
    return FloatField(config.float_threshold)


def float_list(text: str) -> List[float]:
    """argparse type for comma separated floats such as '0.25,0.5,1'."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from e
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def weight_profile(text: str) -> WeightProfile:
    """argparse type for 'identity' or 'linear:<rate>'."""
    if text == "identity":
        return IDENTITY_WEIGHTS
    if text.startswith("linear:"):
        try:
            return WeightProfile.linear(float(text.split(":", 1)[1]))
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    raise argparse.ArgumentTypeError(f"expected 'identity' or 'linear:<rate>', got {text!r}")
