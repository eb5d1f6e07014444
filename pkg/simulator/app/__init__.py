"""
DCC Beaconing Simulator
A deterministic discrete-event simulator of CAM beaconing under Reactive DCC.
"""

__version__ = "1.0.0"
__author__ = "DCC Simulator Team"
