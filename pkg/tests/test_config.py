import sqlite3

import pytest

from core.config_utils import (
    ConfigManager,
    get_catalog_config,
    get_engine_config,
    get_output_config,
    get_resolution_config,
    get_saturation_config,
    validate_config,
)
from core.state import DB_FILENAME, GroebnerCache, ensure_db, get_cache, reset_cache


def test_defaults_from_shipped_file():
    assert get_saturation_config()["max_iterations"] == 10
    assert get_resolution_config() == {"guard_band": 3, "max_length": 3}
    assert get_catalog_config() == {"workers": 1, "data_dir": "data/curves"}
    assert get_output_config() == {"format": "text", "unicode": True}
    engine = get_engine_config()
    assert engine["check"] is False
    assert engine["cache_dir"] is None
    assert validate_config() == {"errors": [], "warnings": []}


def test_missing_file_uses_defaults(tmp_path):
    cfg = ConfigManager().reload(str(tmp_path / "absent.yaml"))
    assert cfg == {}
    assert get_saturation_config(cfg)["max_iterations"] == 10
    assert get_output_config(cfg)["unicode"] is True


def test_env_var_substitution(tmp_path, monkeypatch):
    monkeypatch.setenv("ZIEGLER_CACHE_DIR", str(tmp_path))
    ConfigManager().reload("config.yaml")
    assert get_engine_config()["cache_dir"] == str(tmp_path)


def test_override():
    cm = ConfigManager()
    cm.override("engine", "check", True)
    cm.override("newblock", "k", 1)
    assert get_engine_config()["check"] is True
    assert cm.config["newblock"] == {"k": 1}


def test_validate_errors_and_warnings():
    result = validate_config({
        "saturation": {"max_iterations": 0},
        "resolution": {"guard_band": 0, "max_length": 4},
        "output": {"format": "xml"},
        "logging": {"stream": "stdout"},
    })
    assert len(result["errors"]) == 3
    assert any("max_length" in w for w in result["warnings"])
    assert any("stdout" in w for w in result["warnings"])

    result = validate_config({"engine": {"cache": True}, "saturation": {"max_iterations": 99}})
    assert result["errors"] == []
    assert len(result["warnings"]) == 2

    assert validate_config({"engine": "on"})["errors"]


def test_ensure_db_is_idempotent(tmp_path):
    path = str(tmp_path / DB_FILENAME)
    ensure_db(path)
    ensure_db(path)
    conn = sqlite3.connect(path)
    cols = [r[1] for r in conn.execute("PRAGMA table_info(gb_cache)").fetchall()]
    conn.close()
    assert "hits" in cols and "payload" in cols


def test_cache_singleton_follows_config(tmp_path):
    assert get_cache() is None
    cm = ConfigManager()
    cm.override("engine", "cache", True)
    cm.override("engine", "cache_dir", str(tmp_path))
    reset_cache()
    cache = get_cache()
    assert isinstance(cache, GroebnerCache)
    assert get_cache() is cache


def test_validate_config_tool(monkeypatch, capsys):
    from tools.validate_config import check_value, main as tool_main

    cfg = {"saturation": {"max_iterations": "ten"}, "catalog": {"workers": 2}}
    assert check_value(cfg, "catalog.workers", int)[0]
    ok, msg = check_value(cfg, "saturation.max_iterations", int)
    assert not ok and "类型错误" in msg
    assert check_value(cfg, "output.format", str, required=False)[0]
    assert not check_value(cfg, "output.format", str)[0]

    monkeypatch.setattr("sys.argv", ["validate_config.py", "config.yaml"])
    with pytest.raises(SystemExit) as info:
        tool_main()
    assert info.value.code == 0
    assert "所有关键配置正常" in capsys.readouterr().out


def test_export_catalog_tool(tmp_path, monkeypatch):
    from tools.export_catalog import main as tool_main

    monkeypatch.setattr("sys.argv", ["export_catalog.py", str(tmp_path)])
    tool_main()
    assert len(list(tmp_path.glob("*.json"))) == 17
