"""Average qubit dynamics under two-state Markov noise.

Thin wrapper over the compiled extension module.
"""

try:
    from ._rtnoise import *  # noqa: F401,F403
    from ._rtnoise import __doc__  # noqa: F401
except ImportError:  # pragma: no cover - in-tree test runs against the build dir
    from _rtnoise import *  # noqa: F401,F403

__version__ = "0.1.0"
