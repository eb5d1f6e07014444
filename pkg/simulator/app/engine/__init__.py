"""
Discrete-event engine.
"""

from .event_queue import US_PER_MS, US_PER_S, Event, EventHandle, EventKind, EventQueue, SimTime

__all__ = ["US_PER_MS", "US_PER_S", "Event", "EventHandle", "EventKind", "EventQueue", "SimTime"]
