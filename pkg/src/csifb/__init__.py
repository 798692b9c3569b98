"""PCA/KLT compressive CSI feedback for massive MIMO-OFDM."""

__version__ = "1.0.0"
