"""Desk-scale lab for magnetometer-based finger identification on earbuds.

Physics-grounded synthetic taps from a ring-worn magnet, the deployment
preprocessing path, two from-scratch classifiers, int8 quantization, and an
evaluation harness with a CLI and HTTP service on top.
"""

__version__ = "0.1.0"
