import pytest

from src.core.interfaces import ConfigError
from src.services import factory as factory_module
from src.services.constant_cache import FileConstantCache, NullConstantCache
from src.services.factory import ServiceFactory, get_service_factory, initialize_services
from src.services.settings import CliConfig


def test_file_cache_when_enabled(tmp_path):
    factory = ServiceFactory()
    factory.create_services(CliConfig(cache_path=str(tmp_path / "c.mzvcache"), precision_bits=96))
    assert isinstance(factory.get_constant_cache(), FileConstantCache)
    assert factory.get_evaluator().precision == 96
    assert factory.get_verifier().cache_path == str(tmp_path / "c.mzvcache")


def test_null_cache_when_disabled():
    factory = ServiceFactory()
    factory.create_services(CliConfig(use_cache=False))
    assert isinstance(factory.get_constant_cache(), NullConstantCache)
    assert factory.get_verifier().cache_path is None


def test_direct_method_skips_cache(tmp_path):
    factory = ServiceFactory()
    factory.create_services(CliConfig(cache_path=str(tmp_path / "c.mzvcache"), mzv_method='direct'))
    assert isinstance(factory.get_constant_cache(), NullConstantCache)


def test_shutdown_flushes_cache(tmp_path):
    path = tmp_path / "c.mzvcache"
    factory = ServiceFactory()
    factory.create_services(CliConfig(cache_path=str(path)))
    factory.get_evaluator().mzv((2,))
    assert not path.exists()
    factory.shutdown()
    assert path.exists()


def test_invalid_config_is_rejected():
    with pytest.raises(ConfigError, match="precision_bits"):
        ServiceFactory().create_services(CliConfig(use_cache=False, precision_bits=8))


def test_lazy_initialization():
    factory = ServiceFactory()
    assert factory.get_evaluator().precision == 128
    assert factory.get_config().use_cache is False


def test_global_factory(monkeypatch):
    monkeypatch.setattr(factory_module, "_service_factory", None)
    first = get_service_factory()
    assert get_service_factory() is first
    assert initialize_services(CliConfig(use_cache=False)) is first
