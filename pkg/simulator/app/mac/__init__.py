"""
Broadcast MAC for CAMs.
"""

from .csma import AccessState, CamFrame, CamQueue, CsmaMac, NodeMac

__all__ = ["AccessState", "CamFrame", "CamQueue", "CsmaMac", "NodeMac"]
