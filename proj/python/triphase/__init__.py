"""Python interface to the triphase phase-field solver."""

from triphase._core import *  # noqa: F401,F403
from triphase._core import __doc__ as _core_doc

__doc__ = _core_doc
