from ._core import AigerError, check, corpus, ladder, reachable, strategy_params

STRATEGIES = ("standard", "ctg", "exctg", "dynamic")

__all__ = ["AigerError", "STRATEGIES", "check", "corpus", "ladder", "reachable", "strategy_params"]
