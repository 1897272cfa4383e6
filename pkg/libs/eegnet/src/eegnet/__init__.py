from eegnet.metrics import MetricsReport, compute_metrics

__all__ = ["MetricsReport", "compute_metrics"]
