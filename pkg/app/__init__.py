"""signalbox: communication strength of boxes that violate no-signaling monogamy relations."""

from .config import get_settings, load_run_config

__all__ = ['get_settings', 'load_run_config']
