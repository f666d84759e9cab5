# tests/conftest.py - 共享夹具
import os

import pytest

from core.config_utils import ConfigManager
from core.polyring import Poly
from core.scalars import QQ, QuadraticField
from core.state import reset_cache
from core.utils import set_verbose

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """每个用例重新读 config.yaml, 清掉命令行覆盖和缓存单例"""
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("ZIEGLER_CACHE_DIR", raising=False)
    ConfigManager().reload(os.path.join(ROOT, "config.yaml"))
    reset_cache()
    set_verbose(False)
    yield
    ConfigManager().reload(os.path.join(ROOT, "config.yaml"))
    reset_cache()


@pytest.fixture
def sqrt2():
    return QuadraticField(2)


@pytest.fixture
def xyz():
    return tuple(Poly.variable(QQ, v) for v in ("x", "y", "z"))


@pytest.fixture
def xyz2(sqrt2):
    return tuple(Poly.variable(sqrt2, v) for v in ("x", "y", "z"))
