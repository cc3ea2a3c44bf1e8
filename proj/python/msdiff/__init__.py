"""Python bindings for the Maxwell-Stefan reaction-diffusion core."""

try:
    from ._core import *  # noqa: F401,F403  installed layout
except ImportError:
    from _core import *  # noqa: F401,F403  build tree: module next to the package
