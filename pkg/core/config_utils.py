# core/config_utils.py - 统一配置工具模块 v2.0
# 用途：提供配置的单一来源，引擎/饱和/分解/目录/输出/日志各区块都从这里读取

from typing import Dict, Any, Optional
import os
import yaml


class ConfigManager:
    """
    配置管理器 - 单例模式

    解决问题：
    1. 饱和迭代上限、保护带宽度等参数在多处使用，容易不同步
    2. 缓存目录等路径需要从环境变量注入 (${ZIEGLER_CACHE_DIR})
    3. 命令行开关 (--check / --cache / --max-degree) 需要覆盖文件里的值

    使用方式：
    ```python
    from core.config_utils import get_config, get_saturation_config

    cfg = get_config()
    sat = get_saturation_config(cfg)
    print(sat["max_iterations"])  # 10
    ```
    """

    _instance = None
    _config = None
    _path = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def load(self, path: str = "config.yaml") -> Dict[str, Any]:
        """加载配置文件 (文件不存在时使用空配置, 所有 getter 都有默认值)"""
        if self._config is not None:
            return self._config

        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as f:
                raw = yaml.safe_load(f) or {}
        else:
            raw = {}

        # 处理环境变量替换
        self._config = self._resolve_env_vars(raw)
        self._path = path

        return self._config

    def _resolve_env_vars(self, obj: Any) -> Any:
        """递归替换 ${ENV_VAR} 为环境变量值 (未设置时为 None)"""
        if isinstance(obj, str):
            if obj.startswith("${") and obj.endswith("}"):
                env_key = obj[2:-1]
                return os.getenv(env_key)
            return obj
        elif isinstance(obj, dict):
            return {k: self._resolve_env_vars(v) for k, v in obj.items()}
        elif isinstance(obj, list):
            return [self._resolve_env_vars(item) for item in obj]
        return obj

    def reload(self, path: str = "config.yaml") -> Dict[str, Any]:
        """强制重新加载配置"""
        self._config = None
        return self.load(path)

    def override(self, section: str, key: str, value: Any) -> None:
        """命令行开关覆盖配置值"""
        cfg = self.config
        block = cfg.get(section)
        if not isinstance(block, dict):
            block = {}
            cfg[section] = block
        block[key] = value

    @property
    def config(self) -> Dict[str, Any]:
        if self._config is None:
            self.load()
        return self._config


# ==================== 便捷函数 ====================

def get_config(path: str = "config.yaml") -> Dict[str, Any]:
    """获取配置（单例）"""
    return ConfigManager().load(path)


def _section(cfg: Optional[Dict[str, Any]], name: str) -> Dict[str, Any]:
    if cfg is None:
        cfg = get_config()
    block = cfg.get(name) or {}
    return block if isinstance(block, dict) else {}


def get_engine_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """
    🔥 获取 Gröbner 引擎配置

    Returns:
        {
            "check": False,          # 昂贵的内部校验 (S-对复检, d∘d = 0, Hilbert 交叉验证)
            "cache": False,          # 约化 GB 的 sqlite 缓存
            "cache_dir": None,       # 缓存目录, 默认读 ZIEGLER_CACHE_DIR
            "memo_in_process": True, # 进程内字典缓存
        }
    """
    engine = _section(cfg, "engine")
    cache_dir = engine.get("cache_dir") or os.getenv("ZIEGLER_CACHE_DIR")

    return {
        "check": bool(engine.get("check", False)),
        "cache": bool(engine.get("cache", False)),
        "cache_dir": cache_dir,
        "memo_in_process": bool(engine.get("memo_in_process", True)),
    }


def get_saturation_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """饱和计算: J ← (J:x) ∩ (J:y) ∩ (J:z) 的迭代上限"""
    sat = _section(cfg, "saturation")

    return {
        "max_iterations": int(sat.get("max_iterations", 10)),
    }


def get_resolution_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """
    获取分解配置

    guard_band: Hilbert 轮廓在 regularity 之后额外延伸的次数
    max_length: 三元多项式环上自由分解长度的上界
    """
    res = _section(cfg, "resolution")

    return {
        "guard_band": int(res.get("guard_band", 3)),
        "max_length": int(res.get("max_length", 3)),
    }


def get_catalog_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """获取曲线目录配置"""
    catalog = _section(cfg, "catalog")

    return {
        "workers": max(1, int(catalog.get("workers", 1))),
        "data_dir": catalog.get("data_dir", "data/curves"),
    }


def get_output_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """获取输出配置 (text / machine, 是否使用 Unicode 箭头)"""
    out = _section(cfg, "output")

    return {
        "format": out.get("format", "text"),
        "unicode": bool(out.get("unicode", True)),
    }


def get_logging_config(cfg: Dict[str, Any] = None) -> Dict[str, Any]:
    """获取日志配置"""
    lg = _section(cfg, "logging")

    return {
        "verbose": bool(lg.get("verbose", True)),
        "stream": lg.get("stream", "stderr"),
    }


def validate_config(cfg: Dict[str, Any] = None) -> Dict[str, list]:
    """
    验证配置完整性

    Returns:
        {"errors": [...], "warnings": [...]}
    """
    if cfg is None:
        cfg = get_config()

    errors = []
    warnings = []

    for block in ("engine", "saturation", "resolution", "catalog", "output", "logging"):
        if block in cfg and not isinstance(cfg.get(block), dict):
            errors.append(f"{block} 配置区块必须是映射")
    if errors:
        return {"errors": errors, "warnings": warnings}

    sat = get_saturation_config(cfg)
    if sat["max_iterations"] < 1:
        errors.append(f"saturation.max_iterations 必须 >= 1 (当前 {sat['max_iterations']})")
    elif sat["max_iterations"] > 50:
        warnings.append(f"saturation.max_iterations={sat['max_iterations']} 过大, 不稳定时会很慢")

    res = get_resolution_config(cfg)
    if res["guard_band"] < 1:
        errors.append(f"resolution.guard_band 必须 >= 1 (当前 {res['guard_band']})")
    if res["max_length"] != 3:
        warnings.append("resolution.max_length 不是 3, 三元多项式环上分解长度恒 <= 3")

    out = get_output_config(cfg)
    if out["format"] not in ("text", "machine"):
        errors.append(f"output.format 只能是 text 或 machine (当前 {out['format']!r})")

    lg = get_logging_config(cfg)
    if lg["stream"] not in ("stderr", "stdout"):
        errors.append(f"logging.stream 只能是 stderr 或 stdout (当前 {lg['stream']!r})")
    elif lg["stream"] == "stdout":
        warnings.append("日志写到 stdout 会混入 --json 输出")

    engine = get_engine_config(cfg)
    if engine["cache"] and not engine["cache_dir"]:
        warnings.append("engine.cache 已启用但没有 cache_dir / ZIEGLER_CACHE_DIR, 只使用进程内缓存")

    return {"errors": errors, "warnings": warnings}


# ==================== 测试代码 ====================

if __name__ == "__main__":
    print("配置工具测试")
    print("=" * 50)

    try:
        cfg = get_config()
        print("✅ 配置加载成功")

        sat = get_saturation_config(cfg)
        res = get_resolution_config(cfg)
        print(f"\n饱和迭代上限: {sat['max_iterations']}")
        print(f"Hilbert 保护带: {res['guard_band']}")

        result = validate_config(cfg)
        if result["errors"]:
            print(f"\n❌ 配置错误:")
            for e in result["errors"]:
                print(f"  - {e}")
        if result["warnings"]:
            print(f"\n⚠️ 配置警告:")
            for w in result["warnings"]:
                print(f"  - {w}")

        if not result["errors"] and not result["warnings"]:
            print("\n✅ 配置验证通过")

    except Exception as e:
        print(f"❌ 配置加载失败: {e}")
