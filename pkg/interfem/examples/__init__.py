"""Example configurations and scripts."""
