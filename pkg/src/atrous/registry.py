"""Built-in filter banks.

Tap values are stored to 8 decimals exactly as given, so comparisons
against reference values are digit-for-digit.
"""

from __future__ import annotations

from .errors import InputError
from .filterbank import FilterBank
from .sequences import FiniteSequence, convolve, modulate_half

_EX51_H = [-0.05125162, 0.25000000, 0.60250325, 0.25000000, -0.05125162]
_EX51_G = [-0.05125162, -0.25000000, 0.60250325, -0.25000000, -0.05125162]

_EX52_H = [-0.00531052, -0.05173370, 0.25531052, 0.60346740, 0.25531052, -0.05173370,
           -0.00531052]
_EX52_G = [0.00531052, -0.05173370, -0.25531052, 0.60346740, -0.25531052, -0.05173370,
           0.00531052]

_EX53_H = [-0.05, 0.05, 0.3, 0.4, 0.3, 0.05, -0.05]
_EX53_G1 = [-0.03511286, 0.02810626, -0.24357939, -0.02810626, 0.55738452, -0.02810626,
            -0.24357939, 0.02810626, -0.03511286]
_EX53_G2 = [-0.02588834, 0.00000000, 0.12500000, -0.25000000, 0.30177670, -0.25000000,
            0.12500000, 0.00000000, -0.02588834]

_EX54_H = [-0.10956917, 0.09694723, 0.31919216, 0.40305277, 0.29037701]
_EX54_G1 = [-0.03342562, -0.10296278, -0.05386255, 0.33807931, 0.13363824, -0.36727027,
            0.02801366, 0.13215374, -0.07436373]
_EX54_G2 = [0.01271264, 0.04169253, 0.01150312, -0.13643441, -0.06718653, 0.20830747,
            -0.26150312, 0.38643441, -0.19552611]


def _divergent() -> FilterBank:
    # Haar factor times p(xi) = 2 - cos(2 pi xi)
    h = convolve(FiniteSequence(-1, [0.5, 0.5]), FiniteSequence(-1, [-0.5, 2.0, -0.5]))
    return FilterBank(h, (modulate_half(h),), "divergent-example")


def _build() -> dict[str, FilterBank]:
    seq = FiniteSequence
    return {
        "haar": FilterBank(seq(0, [0.5, 0.5]), (seq(0, [0.5, -0.5]),), "haar"),
        "example-5.1": FilterBank(seq(-2, _EX51_H), (seq(-2, _EX51_G),), "example-5.1"),
        "example-5.2": FilterBank(seq(-3, _EX52_H), (seq(-3, _EX52_G),), "example-5.2"),
        "example-5.3": FilterBank(seq(-3, _EX53_H), (seq(-4, _EX53_G1), seq(-4, _EX53_G2)),
                                  "example-5.3"),
        "example-5.4": FilterBank(seq(-2, _EX54_H), (seq(-4, _EX54_G1), seq(-4, _EX54_G2)),
                                  "example-5.4"),
        "divergent-example": _divergent(),
    }


REGISTRY: dict[str, FilterBank] = _build()


def names() -> list[str]:
    return list(REGISTRY)


def get(name: str) -> FilterBank:
    try:
        return REGISTRY[name]
    except KeyError:
        raise InputError(f"unknown filter bank {name!r}; known: {', '.join(REGISTRY)}") from None
