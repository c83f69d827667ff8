"""Twisted canonical divisors, limit spin structures and flat surgeries."""

import logging
from typing import Any

import voluptuous as vol

from .const import (
    CONF_EFFECTIVE_SEARCH_BOUND,
    CONF_REFINED,
    CONF_SECOND_KIND,
    CONF_SEMISTABLE_SEARCH_LENGTH,
    DEFAULT_EFFECTIVE_SEARCH_BOUND,
    DEFAULT_SEMISTABLE_SEARCH_LENGTH,
    VERSION,
)

_LOGGER = logging.getLogger(__name__)

OPTIONS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_REFINED, default=False): bool,
        vol.Optional(
            CONF_EFFECTIVE_SEARCH_BOUND, default=DEFAULT_EFFECTIVE_SEARCH_BOUND
        ): vol.All(int, vol.Range(min=0)),
        vol.Optional(
            CONF_SEMISTABLE_SEARCH_LENGTH, default=DEFAULT_SEMISTABLE_SEARCH_LENGTH
        ): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_SECOND_KIND, default=False): bool,
    }
)


def options(**values: Any) -> dict[str, Any]:
    """Validated analysis options with defaults filled in."""
    validated: dict[str, Any] = OPTIONS_SCHEMA(values)
    _LOGGER.debug("Analysis options: %s", validated)
    return validated


__all__ = ["OPTIONS_SCHEMA", "VERSION", "options"]
