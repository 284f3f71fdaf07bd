"""Interpretability logic on finite Veltman frames: formulas, forcing, simulations, proofs, search."""
from .semantics import (  # noqa: F401
    FrameError, VeltmanFrame, VeltmanModel, check_condition, forces, load_frame, load_model,
    validate_frame,
)

__version__ = "0.1.0"
