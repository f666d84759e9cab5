# core/utils.py - 通用工具 v3.0 (日志 + 计时 + 异常体系)
# -*- coding: utf-8 -*-
"""
公共工具层:
1. log(tag, msg)      - 统一的 [TAG] 日志输出 (走 stderr, 不污染 --json 的 stdout)
2. timed(tag, label)  - 计时上下文, 长步骤结束时打印耗时
3. 异常体系           - CLI 根据异常类型映射退出码
"""

import sys
import time
import threading
from contextlib import contextmanager
from typing import Any, Dict, List, Optional, Tuple

# ========== 日志 ==========
_LOG_STATE = {"verbose": True, "stream": "stderr"}
_LOG_LOCK = threading.Lock()


def configure_logging(cfg: Optional[Dict[str, Any]] = None) -> None:
    """根据 logging 配置区块设置输出 (verbose / stream)"""
    cfg = cfg or {}
    _LOG_STATE["verbose"] = bool(cfg.get("verbose", True))
    _LOG_STATE["stream"] = cfg.get("stream", "stderr")


def set_verbose(flag: bool) -> None:
    _LOG_STATE["verbose"] = bool(flag)


def log(tag: str, message: str) -> None:
    if not _LOG_STATE["verbose"]:
        return
    stream = sys.stdout if _LOG_STATE["stream"] == "stdout" else sys.stderr
    with _LOG_LOCK:
        print(f"[{tag}] {message}", file=stream, flush=True)


@contextmanager
def timed(tag: str, label: str):
    """计时: 结束时输出 [TAG] ✅ label 耗时 x.x秒"""
    start = time.time()
    try:
        yield
    finally:
        elapsed = time.time() - start
        log(tag, f"✅ {label} 耗时 {elapsed:.1f}秒")


# ========== 异常体系 ==========
class ZieglerError(Exception):
    """所有业务异常的基类"""


class FieldMismatchError(ZieglerError):
    def __init__(self, message: str = "field mismatch"):
        super().__init__(message)


class NotHomogeneousError(ZieglerError):
    def __init__(self, message: str = "not homogeneous"):
        super().__init__(message)


class PolySyntaxError(ZieglerError):
    """多项式表达式语法错误, position 为 0 起始的字符位置"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class CurveSchemaError(ZieglerError):
    """曲线文件结构错误, path 形如 components[2].poly"""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class DegreeMismatchError(ZieglerError):
    pass


class NonReducedCurveError(ZieglerError):
    """Hilbert 函数不稳定 => 奇异轨迹是一维的 => 曲线非既约"""

    def __init__(self, name: str, profile: List[Tuple[int, int]]):
        tail = ", ".join(f"{t}:{v}" for t, v in profile[-4:])
        super().__init__(f"curve '{name}' is not reduced (Hilbert profile tail {tail})")
        self.name = name
        self.profile = profile


class NotMinimalError(ZieglerError):
    def __init__(self, message: str = "minimize first"):
        super().__init__(message)


class SaturationError(ZieglerError):
    pass


class UnknownCatalogKeyError(ZieglerError):
    def __init__(self, key: str):
        super().__init__(f"unknown catalog key '{key}'")
        self.key = key


class UnknownSingularityError(ZieglerError):
    def __init__(self, kind: str):
        super().__init__(f"unknown kind '{kind}'")
        self.kind = kind


# CLI 退出码 (与 --help 文档保持一致)
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NON_REDUCED = 3
EXIT_UNKNOWN_KEY = 4
EXIT_SATURATION = 5
EXIT_DISTINCT = 10
EXIT_INCONCLUSIVE = 11


def exit_code_for(exc: BaseException) -> Optional[int]:
    """异常 -> 退出码; 不认识的异常返回 None (交给调用方继续抛出)"""
    if isinstance(exc, (PolySyntaxError, CurveSchemaError, DegreeMismatchError,
                        NotHomogeneousError, FieldMismatchError, ZeroDivisionError)):
        return EXIT_INPUT
    if isinstance(exc, NonReducedCurveError):
        return EXIT_NON_REDUCED
    if isinstance(exc, UnknownCatalogKeyError):
        return EXIT_UNKNOWN_KEY
    if isinstance(exc, SaturationError):
        return EXIT_SATURATION
    return None
