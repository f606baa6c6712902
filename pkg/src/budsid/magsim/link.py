"""Lossy wireless link: stochastic thinning of the 80 Hz sensor stream."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trace import RawTrace, ReceivedTrace

POLL_RATE_HZ = 60.0
RATE_EPOCH_S = 1.0


@dataclass(frozen=True)
class LinkProfile:
    """Delivery rate target in Hz; the effective rate wanders around it per epoch."""

    target_mean_rate: float
    rate_sd: float
    poll_rate: float = POLL_RATE_HZ

    def __post_init__(self) -> None:
        if self.target_mean_rate <= 0:
            raise ValueError("target_mean_rate must be positive")
        if self.rate_sd < 0:
            raise ValueError("rate_sd must be >= 0")
        if self.poll_rate != POLL_RATE_HZ:
            raise ValueError(f"poll_rate is fixed at {POLL_RATE_HZ:.0f} Hz")

    @classmethod
    def single_tap_study(cls) -> "LinkProfile":
        return cls(34.0, 2.7)

    @classmethod
    def double_tap_study(cls) -> "LinkProfile":
        return cls(41.0, 3.02)


def ble_channel(trace: RawTrace, link: LinkProfile, seed: int) -> ReceivedTrace:
    """Independently thin samples so the delivered rate tracks the link target.

    The keep probability is resampled every epoch around the target rate, which
    reproduces the observed second-to-second rate wander. A target at or above
    the source rate passes the trace through untouched.
    """
    if link.target_mean_rate > trace.sample_rate:
        raise ValueError(
            f"link target {link.target_mean_rate} Hz exceeds the {trace.sample_rate} Hz source"
        )
    if link.target_mean_rate == trace.sample_rate:
        return ReceivedTrace(trace.timestamps.copy(), trace.mag.copy(), list(trace.touch_events))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), 0x1B7E])))
    epochs = np.floor(trace.timestamps / RATE_EPOCH_S).astype(np.int64)
    n_epochs = int(epochs.max()) + 1
    rates = np.clip(rng.normal(link.target_mean_rate, link.rate_sd, n_epochs), 1.0, trace.sample_rate)
    keep_prob = rates[epochs] / trace.sample_rate
    keep = rng.random(trace.timestamps.shape[0]) < keep_prob
    if not np.any(keep):
        keep[0] = True
    return ReceivedTrace(trace.timestamps[keep], trace.mag[keep], list(trace.touch_events))
