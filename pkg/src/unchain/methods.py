"""Uniform handle on the five clustering methods."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linkage import LinkageKind, standard_linkage_dendrogram
from .metric import Dendrogram, FiniteMetricSpace, Ultrametric, dendrogram_to_ultrametric
from .unchaining import sl_alpha_dendrogram, sl_star_alpha_dendrogram

__all__ = ["MethodId", "SL", "CL", "AL", "SLalpha", "SLstar", "parse_method", "run_method", "method_ultrametric"]

_TAGS = ("SL", "CL", "AL", "SLalpha", "SLstarAlpha")
_LINKAGE = {"SL": LinkageKind.SINGLE, "CL": LinkageKind.COMPLETE, "AL": LinkageKind.AVERAGE}


@dataclass(frozen=True)
class MethodId:
    tag: str
    alpha: object = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown method {self.tag!r}")
        needs_alpha = self.tag in ("SLalpha", "SLstarAlpha")
        if needs_alpha:
            if self.alpha is None or not self.alpha >= 1:
                raise ValueError(f"{self.tag} needs alpha >= 1, got {self.alpha!r}")
        elif self.alpha is not None:
            raise ValueError(f"{self.tag} takes no alpha")

    def __str__(self):
        if self.alpha is None:
            return self.tag
        return f"{self.tag}({self.alpha})"

    def run(self, space: FiniteMetricSpace) -> Dendrogram:
        if self.tag in _LINKAGE:
            return standard_linkage_dendrogram(space, _LINKAGE[self.tag])
        if self.tag == "SLalpha":
            return sl_alpha_dendrogram(space, self.alpha)
        return sl_star_alpha_dendrogram(space, self.alpha)

    def ultrametric(self, space: FiniteMetricSpace) -> Ultrametric:
        return dendrogram_to_ultrametric(self.run(space))


SL = MethodId("SL")
CL = MethodId("CL")
AL = MethodId("AL")


def SLalpha(alpha) -> MethodId:
    return MethodId("SLalpha", alpha)


def SLstar(alpha) -> MethodId:
    return MethodId("SLstarAlpha", alpha)


def _parse_alpha(text):
    text = str(text)
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def parse_method(name: str, alpha=None) -> MethodId:
    """Parse CLI-style names: ``sl``, ``cl``, ``al``, ``sl-alpha``, ``sl-star``.

    ``sl-alpha:2`` and ``SLstarAlpha(2)`` forms carry alpha inline.
    """
    name = name.strip()
    inline = None
    for sep in (":", "("):
        if sep in name:
            name, inline = name.split(sep, 1)
            inline = inline.rstrip(")")
    if inline is not None:
        alpha = _parse_alpha(inline)
    elif isinstance(alpha, str):
        alpha = _parse_alpha(alpha)
    key = name.lower().replace("_", "-")
    table = {
        "sl": "SL", "single": "SL",
        "cl": "CL", "complete": "CL",
        "al": "AL", "average": "AL",
        "sl-alpha": "SLalpha", "slalpha": "SLalpha",
        "sl-star": "SLstarAlpha", "slstar": "SLstarAlpha", "slstaralpha": "SLstarAlpha",
        "sl-star-alpha": "SLstarAlpha",
    }
    if key not in table:
        raise ValueError(f"unknown method {name!r}")
    tag = table[key]
    return MethodId(tag, alpha if tag in ("SLalpha", "SLstarAlpha") else None)


def run_method(method, space: FiniteMetricSpace) -> Dendrogram:
    if not isinstance(method, MethodId):
        method = parse_method(method)
    return method.run(space)


def method_ultrametric(method, space: FiniteMetricSpace) -> Ultrametric:
    return dendrogram_to_ultrametric(run_method(method, space))
