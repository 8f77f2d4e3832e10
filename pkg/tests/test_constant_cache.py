import logging

import mpmath
import pytest

from src.core.interfaces import CacheCorrupt
from src.services.constant_cache import (
    CACHE_HEADER, FileConstantCache, NullConstantCache, decimal_to_mpf, format_record,
    mpf_to_decimal, parse_record
)
from src.services.numerics import ConstKind, ConstTag
from src.services.realball import RealBall

ZETA2 = ConstKind(ConstTag.MZV, (2,))
XI = ConstKind(ConstTag.XI, (1, 2), 3)


@pytest.mark.parametrize("value, text", [
    (0.5, "0.5"),
    (-0.25, "-0.25"),
    (3, "3"),
    (1.5, "1.5"),
    (0, "0"),
])
def test_mpf_to_decimal(value, text):
    assert mpf_to_decimal(mpmath.mpf(value)) == text
    assert decimal_to_mpf(text) == value


def test_decimal_round_trip_is_exact():
    with mpmath.workprec(200):
        value = +mpmath.pi
    assert decimal_to_mpf(mpf_to_decimal(value)) == value


@pytest.mark.parametrize("text", ["0.1", "abc", "1/0"])
def test_decimal_to_mpf_rejects_bad_text(text):
    with pytest.raises(CacheCorrupt):
        decimal_to_mpf(text)


def test_record_round_trip():
    ball = RealBall.pi(128)
    key, parsed = parse_record(format_record(XI, ball))
    assert key == XI
    assert parsed.mid == ball.mid and parsed.rad == ball.rad and parsed.prec == 128


def test_record_checksum():
    line = format_record(ZETA2, RealBall.pi(64))
    tampered = line.replace("MZV|", "MTV|", 1)
    with pytest.raises(CacheCorrupt, match="Checksum"):
        parse_record(tampered)


def test_record_field_count():
    with pytest.raises(CacheCorrupt, match="7 fields"):
        parse_record("MZV|(2)||64|1|0")


def test_put_flush_and_reload(tmp_path):
    path = tmp_path / "sub" / "constants.mzvcache"
    cache = FileConstantCache(path)
    cache.put(ZETA2, RealBall.pi(128))
    cache.flush()
    assert path.read_text(encoding='utf-8').splitlines()[0] == CACHE_HEADER

    reloaded = FileConstantCache(path)
    assert reloaded.get(ZETA2, 128).prec == 128
    assert reloaded.get(ZETA2, 256) is None
    assert reloaded.stats()['hits'] == 1
    assert reloaded.stats()['misses'] == 1


def test_corrupt_record_is_skipped(tmp_path, caplog):
    path = tmp_path / "constants.mzvcache"
    good = format_record(ZETA2, RealBall.pi(64))
    bad = format_record(XI, RealBall.pi(64))[:-1] + "x"
    path.write_text("\n".join([CACHE_HEADER, good, bad]) + "\n", encoding='utf-8')

    with caplog.at_level(logging.WARNING):
        cache = FileConstantCache(path)
    assert cache.stats()['entries'] == 1
    assert cache.stats()['skipped_records'] == 1
    assert "line 3" in caplog.text


def test_unknown_header_ignores_file(tmp_path, caplog):
    path = tmp_path / "constants.mzvcache"
    path.write_text("MZVCACHE v0\n" + format_record(ZETA2, RealBall.pi(64)) + "\n",
                    encoding='utf-8')
    with caplog.at_level(logging.WARNING):
        cache = FileConstantCache(path)
    assert cache.stats()['entries'] == 0
    assert "unknown header" in caplog.text


def test_higher_precision_wins(cache):
    cache.put(ZETA2, RealBall.pi(256))
    cache.put(ZETA2, RealBall.pi(128))
    assert cache.get(ZETA2, 200).prec == 256


def test_clear_removes_file(tmp_path):
    path = tmp_path / "constants.mzvcache"
    cache = FileConstantCache(path)
    cache.put(ZETA2, RealBall.pi(64))
    cache.flush()
    cache.clear()
    assert not path.exists()
    assert cache.stats()['entries'] == 0


def test_flush_without_changes_writes_nothing(tmp_path):
    path = tmp_path / "constants.mzvcache"
    FileConstantCache(path).flush()
    assert not path.exists()


def test_null_cache():
    cache = NullConstantCache()
    cache.put(ZETA2, RealBall.pi(64))
    assert cache.get(ZETA2, 64) is None
    assert cache.stats()['entries'] == 0
