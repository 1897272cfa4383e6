from sen.main import dispatch, main

__all__ = ["dispatch", "main"]
