"""Exact enumeration and series analysis of vicious and friendly walker watermelons."""

from melonkit.series import LaurentSeries, rf_expand

__version__ = "0.1.0"

__all__ = ["LaurentSeries", "rf_expand", "__version__"]
