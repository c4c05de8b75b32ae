"""
Managers package for run management classes.
Includes ReportManager and Timer.
"""

from managers.report_manager import ReportManager
from managers.timer import Timer

__all__ = ['ReportManager', 'Timer']
