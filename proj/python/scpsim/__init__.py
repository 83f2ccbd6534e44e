"""Classical simulation of quantum circuits followed by sparse post-processing."""

try:
    from ._scpsim import *  # noqa: F401,F403  (installed package layout)
    from ._scpsim import __doc__  # noqa: F401
except ImportError:
    from _scpsim import *  # noqa: F401,F403  (in-tree build via PYTHONPATH)
    from _scpsim import __doc__  # noqa: F401

__version__ = "0.1.0"
