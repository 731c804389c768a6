"""hoopsim: a deterministic asynchronous-action basketball simulator and
multi-agent RL benchmark suite."""

__version__ = "0.1.0"
