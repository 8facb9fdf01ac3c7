"""One-class SVM anomaly detection with projected quantum kernels, on a simulated backend."""

__version__ = "0.1.0"
