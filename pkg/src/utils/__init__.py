from src.utils.logger import setup_logger
from src.utils.metrics import RuntimeBudget

__all__ = [
    "setup_logger",
    "RuntimeBudget",
]
