#!/usr/bin/env python3
"""
配置验证脚本
检查config.yaml所有关键配置项 (engine / saturation / resolution / catalog / output / logging)
"""

import os
import sys
from typing import Dict, List, Tuple

import yaml

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from core.config_utils import ConfigManager, validate_config  # noqa: E402


def load_config(path: str) -> Dict:
    """加载配置文件 (含 ${ENV} 替换)"""
    if not os.path.exists(path):
        print(f"❌ 未找到{path}文件")
        sys.exit(1)
    try:
        return ConfigManager().reload(path)
    except yaml.YAMLError as e:
        print(f"❌ 加载配置失败: {e}")
        sys.exit(1)


def check_value(config: Dict, path: str, expected_type=None, required=True) -> Tuple[bool, str]:
    """检查配置值"""
    keys = path.split('.')
    value = config

    try:
        for key in keys:
            value = value[key]

        if required and value is None:
            return False, f"❌ {path}: 未设置"

        if expected_type and not isinstance(value, expected_type):
            names = expected_type.__name__ if isinstance(expected_type, type) else "/".join(t.__name__ for t in expected_type)
            return False, f"⚠️ {path}: 类型错误（期望{names}，实际{type(value).__name__}）"

        return True, f"✅ {path}: {value}"

    except (KeyError, TypeError):
        if required:
            return False, f"❌ {path}: 缺失"
        else:
            return True, f"⚠️ {path}: 缺失（可选，使用默认值）"


CHECKS: List[Tuple[str, List[Tuple[str, object, bool]]]] = [
    ("⚙️ 引擎:", [
        ('engine.check', bool, False),
        ('engine.cache', bool, False),
        ('engine.memo_in_process', bool, False),
    ]),
    ("🔁 饱和:", [
        ('saturation.max_iterations', int, False),
    ]),
    ("📐 分解:", [
        ('resolution.guard_band', int, False),
        ('resolution.max_length', int, False),
    ]),
    ("📚 目录:", [
        ('catalog.workers', int, False),
        ('catalog.data_dir', str, False),
    ]),
    ("🖨️ 输出:", [
        ('output.format', str, False),
        ('output.unicode', bool, False),
    ]),
    ("📝 日志:", [
        ('logging.verbose', bool, False),
        ('logging.stream', str, False),
    ]),
]


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else 'config.yaml'
    print("="*60)
    print("🔍 配置验证")
    print("="*60)
    print()

    config = load_config(path)
    issues = []
    warnings = []

    for title, checks in CHECKS:
        print(title)
        for key, expected_type, required in checks:
            ok, msg = check_value(config, key, expected_type, required)
            print(f"  {msg}")
            if not ok:
                issues.append(msg)
        print()

    # 缓存目录
    print("📦 缓存:")
    cache_dir = config.get('engine', {}).get('cache_dir') if isinstance(config.get('engine'), dict) else None
    env_dir = os.getenv("ZIEGLER_CACHE_DIR")
    print(f"  {'✅' if cache_dir or env_dir else 'ℹ️ '} cache_dir: {cache_dir or env_dir or '未设置（仅进程内缓存）'}")
    print()

    result = validate_config(config)
    issues.extend(result["errors"])
    warnings.extend(result["warnings"])

    # 总结
    print("="*60)
    if not issues:
        print("✅ 所有关键配置正常")
    else:
        print(f"❌ 发现 {len(issues)} 个问题:")
        for issue in issues:
            print(f"  • {issue}")

    if warnings:
        print(f"\n⚠️ 发现 {len(warnings)} 个警告:")
        for warning in warnings:
            print(f"  • {warning}")
    print("="*60)

    sys.exit(0 if not issues else 1)


if __name__ == "__main__":
    main()
