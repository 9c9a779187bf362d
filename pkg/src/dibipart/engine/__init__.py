"""The partition pipeline: families, safe colouring, connecting paths,
exceptional vertices and final assembly."""

from .params import Parameters
from .pipeline import run_pipeline, try_pipeline
from .state import COLORS, I, II, EngineState

__all__ = ["Parameters", "run_pipeline", "try_pipeline", "EngineState", "COLORS", "I", "II"]
