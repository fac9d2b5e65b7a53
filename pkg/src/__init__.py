"""
NLQ-Sim: Nonlinear Qubit Simulator
Measurement-induced nonlinear dynamics, post-selected two-qubit circuits and state discrimination
"""

__version__ = "0.1.0"
__author__ = "NLQ-Sim Team"
