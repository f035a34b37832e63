"""Linear matroid base polytopes and volume decomposition functionals."""
from __future__ import annotations

__version__ = "0.1.0"
