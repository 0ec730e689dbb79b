"""Run deeply recursive helpers on a thread with a large C stack."""
from __future__ import annotations

import sys
import threading
from typing import Any, Callable

_STACK = 512 * 1024 * 1024
_LIMIT = 1_000_000


def run_deep(fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
    if threading.current_thread().name == "goedel-deep":
        return fn(*args, **kwargs)
    box: dict[str, Any] = {}

    def target() -> None:
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_size = threading.stack_size()
    old_limit = sys.getrecursionlimit()
    threading.stack_size(_STACK)
    sys.setrecursionlimit(max(old_limit, _LIMIT))
    try:
        t = threading.Thread(target=target, name="goedel-deep")
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box.get("value")
