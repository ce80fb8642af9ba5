"""Runge-Kutta法の凸縮小性ツール"""

__version__ = "0.1.0"
