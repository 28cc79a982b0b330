"""Flat ``key = value`` text documents used for configs and presets.

One assignment per line; blank lines and lines starting with ``#`` are
ignored. Values are parsed by the consumer.
"""
from .errors import FormatError

__all__ = ["parse_kv", "format_kv", "parse_bool", "parse_optional_float", "parse_floats"]


def parse_kv(text, allowed=None, source="<config>"):
    """Parse a flat key-value document into an ordered ``dict`` of strings.

    ``allowed`` may be a collection of permitted keys or a predicate; any
    other key raises :class:`FormatError`.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise FormatError(f"{source}:{lineno}: empty key")
        ok = allowed is None or (allowed(key) if callable(allowed) else key in allowed)
        if not ok:
            raise FormatError(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise FormatError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def format_kv(items):
    return "".join(f"{k} = {v}\n" for k, v in items.items())


def parse_bool(value):
    v = value.strip().lower()
    if v in ("true", "1", "yes", "on"):
        return True
    if v in ("false", "0", "no", "off"):
        return False
    raise FormatError(f"not a boolean: {value!r}")


def parse_optional_float(value):
    return None if value.strip().lower() in ("none", "") else float(value)


def parse_floats(value):
    return [float(x) for x in value.replace(",", " ").split()]
