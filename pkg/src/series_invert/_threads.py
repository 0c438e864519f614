import os


def thread_count() -> int:
    """Worker cap from ``SERIES_INVERT_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("SERIES_INVERT_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SERIES_INVERT_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("SERIES_INVERT_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)
