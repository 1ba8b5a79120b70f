"""Closed-orbit search for the Kepler problem on the Heisenberg group."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__  # noqa: F401
except ImportError:  # running against a build tree on PYTHONPATH
    from _core import *  # noqa: F401,F403
    from _core import __doc__  # noqa: F401
