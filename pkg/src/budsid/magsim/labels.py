"""Trial labels: which finger tapped, with which hand, in which posture."""

from __future__ import annotations

from dataclasses import dataclass

FINGERS = ("index", "middle", "ring")
HANDS = ("left", "right")
POSTURES = ("sit", "stand", "walk")

MAX_PAIR_GAP_S = 1.0


@dataclass(frozen=True)
class TapLabel:
    finger: str
    hand: str
    posture: str

    def __post_init__(self) -> None:
        if self.finger not in FINGERS:
            raise ValueError(f"unknown finger {self.finger!r}; expected one of {FINGERS}")
        if self.hand not in HANDS:
            raise ValueError(f"unknown hand {self.hand!r}; expected one of {HANDS}")
        if self.posture not in POSTURES:
            raise ValueError(f"unknown posture {self.posture!r}; expected one of {POSTURES}")


@dataclass(frozen=True)
class PairLabel:
    """Ordered double tap: two fingers and the time between the two presses."""

    first: str
    second: str
    inter_touch_time: float

    def __post_init__(self) -> None:
        for finger in (self.first, self.second):
            if finger not in FINGERS:
                raise ValueError(f"unknown finger {finger!r}; expected one of {FINGERS}")
        if not 0.0 < self.inter_touch_time <= MAX_PAIR_GAP_S:
            raise ValueError(
                f"inter_touch_time must be in (0, {MAX_PAIR_GAP_S}] s, got {self.inter_touch_time}"
            )

    def class_name(self) -> str:
        return f"{self.first}-{self.second}"


def pair_class_names() -> list[str]:
    """The nine ordered finger pairs, in fixed enumeration order."""
    return [f"{a}-{b}" for a in FINGERS for b in FINGERS]
