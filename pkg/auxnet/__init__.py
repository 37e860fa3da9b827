"""auxnet: tight-binding networks with auxiliary non-Hermitian clusters."""
from __future__ import annotations

import logging

from .const import DOMAIN, INTEGRATION_VERSION

__version__ = INTEGRATION_VERSION

_LOGGER = logging.getLogger(__name__)
_LOGGER.addHandler(logging.NullHandler())

__all__ = ["DOMAIN", "__version__"]
