"""Python interface to the computation-offloading simulator core."""

try:
    from ._disco import *  # noqa: F401,F403  (installed package layout)
    from ._disco import __version__  # noqa: F401
except ImportError:  # in-tree build: module sits on PYTHONPATH next to package
    from _disco import *  # noqa: F401,F403
    from _disco import __version__  # noqa: F401
