"""Open-quantum-system channel simulation."""

from ._oqsim import *  # noqa: F401,F403
from ._oqsim import __version__, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]


def run(experiment, **options):
    """Run an experiment by name; keyword options map onto ExperimentConfig fields."""
    config = ExperimentConfig()  # noqa: F405
    config.experiment = experiment
    for key, value in options.items():
        if not hasattr(config, key):
            raise TypeError(f"unknown option {key!r}")
        setattr(config, key, value)
    return run_experiment(config)
