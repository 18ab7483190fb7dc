"""Bundled measurement configurations.

The four presets labelled a-d are the reference settings of a 7-block
run at decreasing amounts of anomaly; preset "a" is the strongly
anomalous configuration whose weak value sits far above the top
eigenvalue +7.
"""
from __future__ import annotations

from .analytic import ProtocolParams

PRESETS: dict[str, ProtocolParams] = {
    "a": ProtocolParams(n=7, alpha=0.62, beta=2.53, delta=5.84),
    "b": ProtocolParams(n=7, alpha=0.62, beta=2.53, delta=3.18),
    "c": ProtocolParams(n=7, alpha=0.52, beta=2.62, delta=2.96),
    "d": ProtocolParams(n=7, alpha=0.52, beta=0.88, delta=3.09),
}
