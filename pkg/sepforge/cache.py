"""Memoisation for pure graph computations."""

import logging
from collections import OrderedDict
from functools import wraps
from typing import Any, Callable, Hashable, Optional

logger = logging.getLogger(__name__)

_MISSING = object()


class MemoCache:
    """Bounded in-memory cache for immutable results of pure functions.

    Entries are evicted oldest-first once ``max_entries`` is reached. The bound
    is read from the active settings when not given explicitly.
    """

    def __init__(self, max_entries: Optional[int] = None):
        self._max_entries = max_entries
        self.store: "OrderedDict[Hashable, Any]" = OrderedDict()
        self.hits = 0
        self.misses = 0

    @property
    def max_entries(self) -> int:
        if self._max_entries is not None:
            return self._max_entries
        from sepforge.config import get_settings

        return get_settings().cache_entries

    def get(self, key: Hashable) -> Any:
        """Get value from cache, or the module sentinel when absent."""
        value = self.store.get(key, _MISSING)
        if value is not _MISSING:
            self.store.move_to_end(key)
        return value

    def set(self, key: Hashable, value: Any) -> None:
        limit = self.max_entries
        if limit <= 0:
            return
        self.store[key] = value
        self.store.move_to_end(key)
        while len(self.store) > limit:
            self.store.popitem(last=False)

    def clear(self) -> None:
        """Clear all cache entries."""
        self.store.clear()
        self.hits = 0
        self.misses = 0

    def cached(self, make_cache_key: Optional[Callable[..., Hashable]] = None):
        """Decorator to cache function results.

        Args:
            make_cache_key: Optional function building the key from the call
                arguments. Defaults to the function name plus positional and
                keyword arguments, which must then be hashable.

        Returns:
            Decorated function.
        """

        def decorator(f: Callable) -> Callable:
            @wraps(f)
            def wrapper(*args, **kwargs):
                if make_cache_key:
                    cache_key = make_cache_key(f, *args, **kwargs)
                else:
                    cache_key = (f.__qualname__, args, tuple(sorted(kwargs.items())))

                cached_value = self.get(cache_key)
                if cached_value is not _MISSING:
                    self.hits += 1
                    return cached_value

                self.misses += 1
                result = f(*args, **kwargs)
                self.set(cache_key, result)
                return result

            wrapper.cache = self
            return wrapper

        return decorator


# Global cache instance
cache = MemoCache()
