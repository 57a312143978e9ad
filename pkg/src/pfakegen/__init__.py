"""pfakegen: deterministic pseudo-fake face clip generation and diagnostics."""

__version__ = "0.1.0"

from .media import Clip, load_clip, rgb_to_gray, save_clip  # noqa: F401
from .pipeline import PFAKE_LABEL, REAL_LABEL, generate_batch, generate_pfake  # noqa: F401
from .rpg import (  # noqa: F401
    BlendMethod,
    MaskKind,
    ParamSet,
    Rpg,
    RpgConfig,
    SoftenSide,
    identity_params,
    make_rpg,
    parse_trace,
    serialize_trace,
)
