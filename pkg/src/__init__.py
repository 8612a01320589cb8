__all__ = ["config", "models", "montecarlo", "processes", "specfun", "utils", "verification", "workflow"]
