"""
Persistent constant cache

Computed constants are kept in a line-oriented text file:

    MZVCACHE v1
    kind|index|arg|prec_bits|midpoint_decimal|radius_decimal|crc32

Midpoints and radii are dyadic, so their decimal expansions are finite and
written exactly. The checksum is zlib.crc32 of the preceding fields joined
by '|', as 8 lowercase hex digits. Flushing rewrites the file through a
temporary file and os.replace, so readers never see a torn file.
"""

import logging
import os
import tempfile
import threading
import zlib
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import mpmath
from mpmath import mpf

from ..core.interfaces import AKZetaError, CacheCorrupt, ConstantCache
from .index_core import parse_index
from .numerics import ConstKind, ConstTag
from .realball import RealBall, exact_int

logger = logging.getLogger(__name__)

CACHE_HEADER = "MZVCACHE v1"

Key = Tuple[str, str, str]


def mpf_to_decimal(value: mpf) -> str:
    """Exact decimal expansion of a finite mpf."""
    sign, man, exp, _ = value._mpf_
    if not man:
        return "0"
    prefix = "-" if sign else ""
    if exp >= 0:
        return prefix + str(man << exp)
    digits = str(man * 5 ** (-exp)).rjust(-exp + 1, "0")
    whole, frac = digits[:exp], digits[exp:]
    return prefix + whole + "." + frac


def decimal_to_mpf(text: str) -> mpf:
    """
    Parse an exact decimal written by mpf_to_decimal.

    Raises:
        CacheCorrupt: if the text is not a dyadic rational
    """
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise CacheCorrupt(f"Bad decimal {text!r}") from e
    den = q.denominator
    if den & (den - 1):
        raise CacheCorrupt(f"Decimal {text!r} is not dyadic")
    return mpmath.ldexp(exact_int(q.numerator), -(den.bit_length() - 1))


def _checksum(payload: str) -> str:
    return f"{zlib.crc32(payload.encode('utf-8')) & 0xffffffff:08x}"


def format_record(key: ConstKind, value: RealBall) -> str:
    kind, index, arg = key.cache_key()
    payload = "|".join([kind, index, arg, str(value.prec),
                        mpf_to_decimal(value.mid), mpf_to_decimal(value.rad)])
    return f"{payload}|{_checksum(payload)}"


def parse_record(line: str) -> Tuple[ConstKind, RealBall]:
    """
    Parse one record line.

    Raises:
        CacheCorrupt: on a wrong field count, bad checksum or bad field
    """
    fields = line.rstrip("\n").split("|")
    if len(fields) != 7:
        raise CacheCorrupt(f"Expected 7 fields, found {len(fields)}")
    payload = "|".join(fields[:6])
    if _checksum(payload) != fields[6]:
        raise CacheCorrupt("Checksum mismatch")
    kind, index, arg, prec, mid, rad = fields[:6]
    try:
        key = ConstKind(ConstTag(kind), parse_index(index), int(arg) if arg else None)
        ball = RealBall(decimal_to_mpf(mid), decimal_to_mpf(rad), int(prec))
    except CacheCorrupt:
        raise
    except (ValueError, AKZetaError) as e:
        raise CacheCorrupt(f"Invalid record: {e}") from e
    return key, ball


class FileConstantCache(ConstantCache):
    """ConstantCache backed by an MZVCACHE v1 file"""

    def __init__(self, path: Union[str, Path]):
        """
        Initialize the cache and load the file if it exists

        Args:
            path: Location of the cache file
        """
        self.path = Path(path)
        self._entries: Dict[ConstKind, RealBall] = {}
        self._dirty = False
        self._hits = 0
        self._misses = 0
        self._skipped = 0
        self._lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            with open(self.path, 'r', encoding='utf-8') as f:
                lines = f.readlines()
        except OSError as e:
            logger.warning(f"Could not read cache file {self.path}: {e}")
            return
        if not lines or lines[0].strip() != CACHE_HEADER:
            logger.warning(f"Ignoring cache file {self.path}: unknown header")
            return
        for number, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                key, ball = parse_record(line)
            except CacheCorrupt as e:
                self._skipped += 1
                logger.warning(f"Skipping cache record at line {number}: {e}")
                continue
            current = self._entries.get(key)
            if current is None or ball.prec > current.prec:
                self._entries[key] = ball
        logger.debug(f"Loaded {len(self._entries)} cached constants from {self.path}")

    def get(self, key: ConstKind, precision: int) -> Optional[RealBall]:
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None and entry.prec >= precision:
                self._hits += 1
                return entry
            self._misses += 1
            return None

    def put(self, key: ConstKind, value: RealBall) -> None:
        with self._lock:
            current = self._entries.get(key)
            if current is not None and (current.prec > value.prec or
                                        (current.prec == value.prec and current.rad <= value.rad)):
                return
            self._entries[key] = value
            self._dirty = True

    def flush(self) -> None:
        with self._lock:
            if not self._dirty:
                return
            lines = [CACHE_HEADER]
            for key in sorted(self._entries, key=lambda k: k.sort_key()):
                lines.append(format_record(key, self._entries[key]))
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(dir=self.path.parent, prefix=".mzvcache-")
            try:
                with os.fdopen(fd, 'w', encoding='utf-8') as f:
                    f.write("\n".join(lines) + "\n")
                os.replace(temp_name, self.path)
            except OSError:
                if os.path.exists(temp_name):
                    os.unlink(temp_name)
                raise
            self._dirty = False
            logger.debug(f"Wrote {len(self._entries)} constants to {self.path}")

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._dirty = False
            if self.path.exists():
                self.path.unlink()

    def stats(self) -> Dict[str, Any]:
        with self._lock:
            return {
                'path': str(self.path),
                'entries': len(self._entries),
                'hits': self._hits,
                'misses': self._misses,
                'skipped_records': self._skipped,
            }


class NullConstantCache(ConstantCache):
    """Cache that stores nothing (used with --no-cache)"""

    def get(self, key: ConstKind, precision: int) -> Optional[RealBall]:
        return None

    def put(self, key: ConstKind, value: RealBall) -> None:
        pass

    def flush(self) -> None:
        pass

    def clear(self) -> None:
        pass

    def stats(self) -> Dict[str, Any]:
        return {'path': None, 'entries': 0, 'hits': 0, 'misses': 0, 'skipped_records': 0}
