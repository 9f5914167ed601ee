"""Shared helpers: deterministic serialization, atomic writes, thread budget."""

import hashlib
import json
import os
import tempfile

THREADS_ENV = "GRAPHCORESET_THREADS"


def thread_count() -> int:
    """Worker budget for the few internally parallel loops.

    Controlled by the GRAPHCORESET_THREADS environment variable; defaults to 1
    so results never depend on machine load. Outputs are deterministic at any
    setting because tasks are independent and gathered in submission order.
    """
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


def fmt_float(x) -> str:
    """Format a real with 17 significant digits, '.' decimal separator."""
    return "%.17g" % float(x)


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temp file and rename, never a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj, path: str) -> None:
    """Serialize to JSON with stable layout and write atomically."""
    atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
