"""Experiment registry, experiment bodies and the runner behind the CLI."""
from .registry import EXPERIMENT_REGISTRY, experiment
from .runner import run

__all__ = ['EXPERIMENT_REGISTRY', 'experiment', 'run']
