"""Motif concentration inference from edge-sampled graphs."""
