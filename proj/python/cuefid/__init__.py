"""Python bindings for the cuefid toolkit."""

try:
    from ._cuefid import *  # noqa: F401,F403
    from ._cuefid import __version__
except ImportError:  # in-tree build: extension sits next to the build outputs
    from _cuefid import *  # noqa: F401,F403
    from _cuefid import __version__
