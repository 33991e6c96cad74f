"""Hot-kernel backend selection.

The compiled extension is used when it imported cleanly; the numpy reference
backend otherwise, or always when the ``EXCESSGROWTH_PURE`` environment
variable is set (to anything non-empty).  ``BACKEND`` names the active one.
"""

import os

BACKEND = "pure"

if not os.environ.get("EXCESSGROWTH_PURE"):
    try:
        from ._fast import egr_log_rows, mirror_ascent  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        pass

if BACKEND == "pure":
    from ._ref import egr_log_rows, mirror_ascent  # noqa: F401

__all__ = ["BACKEND", "egr_log_rows", "mirror_ascent"]
