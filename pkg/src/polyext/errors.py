"""Exception hierarchy.

Every error raised by the library derives from :class:`PolyextError` and
carries a short machine-readable ``code`` that the CLI reports verbatim.
"""


class PolyextError(Exception):
    code = "error"


class InvalidSize(PolyextError, ValueError):
    code = "invalid-size"


class UnsupportedMode(PolyextError, ValueError):
    code = "unsupported-mode"


class ModeMismatch(PolyextError, TypeError):
    code = "mode-mismatch"


class InvalidPolygon(PolyextError, ValueError):
    code = "invalid-polygon"


class InvalidSelector(PolyextError, ValueError):
    code = "invalid-selector"


class TooLarge(PolyextError, ValueError):
    code = "too-large"


class NotContained(PolyextError, ValueError):
    code = "not-contained"


class DegenerateFactor(PolyextError, ValueError):
    code = "degenerate-factor"


class FoldingDivergence(PolyextError, RuntimeError):
    code = "folding-divergence"


class NumericalFailure(PolyextError, RuntimeError):
    code = "numerical-failure"


class InvalidInput(PolyextError, ValueError):
    code = "invalid-input"


class LiftFailure(PolyextError, RuntimeError):
    code = "lift-failure"


class DegenerateInput(PolyextError, ValueError):
    code = "degenerate-input"
