from .manifest import KINDS, Setup, build, describe_bounds, evaluate, execute, load_manifest, sweep

__all__ = ["KINDS", "Setup", "build", "describe_bounds", "evaluate", "execute", "load_manifest", "sweep"]
