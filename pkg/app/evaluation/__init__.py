from .harness import CHECKS, run_verification, write_report
from .targets import DEFAULT_TARGETS, Target, TargetStore

__all__ = ['CHECKS', 'DEFAULT_TARGETS', 'Target', 'TargetStore', 'run_verification', 'write_report']
