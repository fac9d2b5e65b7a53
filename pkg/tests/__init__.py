"""
Test suite for NLQ-Sim.
"""
