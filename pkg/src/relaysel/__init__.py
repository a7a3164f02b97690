"""Relay selection for uplink M2M networks."""
