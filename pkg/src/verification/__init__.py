"""Acceptance oracles grouped into suites, and the runner that drives them."""
