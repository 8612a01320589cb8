"""Family registry, command implementations, output writers and the orchestrator."""
