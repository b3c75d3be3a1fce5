"""ddkit: dynamical-decoupling sequences and the engines that verify their decoupling orders."""

__version__ = "0.1.0"
