"""Synthetic palmprint identities from hand images.

Thin wrapper over the C++ core; images are 2-D uint8 numpy arrays.
"""

from ._core import (
    FRAME_SIZE,
    ConfigError,
    GeometryError,
    IoError,
    LookupError,
    PalmforgeError,
    RenderError,
    StageError,
    border_cutout,
    canny,
    check_dataset,
    estimate_affine,
    fit_affine,
    plan,
    plan_jsonl,
    render_pseudo,
    roi_grid,
    run_stage,
    verify_plan,
    warp,
    write_demo_corpus,
)

__all__ = [
    "FRAME_SIZE",
    "ConfigError",
    "GeometryError",
    "IoError",
    "LookupError",
    "PalmforgeError",
    "RenderError",
    "StageError",
    "border_cutout",
    "canny",
    "check_dataset",
    "estimate_affine",
    "fit_affine",
    "plan",
    "plan_jsonl",
    "render_pseudo",
    "roi_grid",
    "run_stage",
    "verify_plan",
    "warp",
    "write_demo_corpus",
]
