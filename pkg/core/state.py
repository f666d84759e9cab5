# core/state.py - Gröbner 缓存的数据库建表/读写
# 约化 GB 按生成元规范串的 sha256 建键, 进程内字典 + 可选 sqlite 两级
import os
import sqlite3
import threading
from datetime import datetime, timezone
from typing import Dict, Iterable, Optional

from .config_utils import get_engine_config
from .utils import log

DB_FILENAME = "groebner_cache.sqlite3"

# ========== 基础表结构 ==========
SCHEMA_GB_CACHE = """
CREATE TABLE IF NOT EXISTS gb_cache (
  key TEXT PRIMARY KEY,
  field TEXT NOT NULL,
  n_generators INTEGER NOT NULL,
  payload TEXT NOT NULL,
  created_ts TEXT NOT NULL,
  hits INTEGER NOT NULL DEFAULT 0
);
"""

INDEXES: Iterable[str] = (
    "CREATE INDEX IF NOT EXISTS idx_gb_cache_field ON gb_cache(field);",
)


# ========== 迁移工具 ==========
def _ensure_table(cur: sqlite3.Cursor, create_sql: str) -> None:
    cur.executescript(create_sql)


def _ensure_column(cur: sqlite3.Cursor, table: str, col: str, coltype: str, default: str = None) -> None:
    cur.execute(f"PRAGMA table_info({table})")
    cols = [r[1] for r in cur.fetchall()]
    if col not in cols:
        if default:
            cur.execute(f"ALTER TABLE {table} ADD COLUMN {col} {coltype} DEFAULT {default};")
        else:
            cur.execute(f"ALTER TABLE {table} ADD COLUMN {col} {coltype};")


def _ensure_indexes(cur: sqlite3.Cursor, indexes: Iterable[str]) -> None:
    for sql in indexes:
        cur.execute(sql)


# ========== 对外入口 ==========
def ensure_db(db_path: str) -> None:
    """
    幂等: 反复调用安全
    - 创建 gb_cache 表
    - 补齐 hits 列 (早期缓存文件没有)
    - 建立索引
    """
    conn = sqlite3.connect(db_path)
    cur = conn.cursor()

    _ensure_table(cur, SCHEMA_GB_CACHE)
    _ensure_column(cur, "gb_cache", "hits", "INTEGER", "0")
    _ensure_indexes(cur, INDEXES)

    conn.commit()
    conn.close()


class GroebnerCache:
    """
    两级缓存, 所有访问都经过同一把锁:
    - memo: 进程内 {key: payload}
    - sqlite: cache_dir 下的 groebner_cache.sqlite3 (cache_dir 为 None 时不落盘)
    payload 是 JSON 文本, 编码/解码由 groebner 负责
    """

    def __init__(self, cache_dir: Optional[str] = None, in_process: bool = True):
        self._lock = threading.Lock()
        self._memo: Dict[str, str] = {}
        self._in_process = in_process
        self.db_path: Optional[str] = None
        self.hits = 0
        self.misses = 0
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)
            self.db_path = os.path.join(cache_dir, DB_FILENAME)
            ensure_db(self.db_path)
            log("CACHE", f"📦 GB 缓存: {self.db_path}")

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            if self._in_process and key in self._memo:
                self.hits += 1
                return self._memo[key]
            if self.db_path:
                conn = sqlite3.connect(self.db_path)
                try:
                    row = conn.execute("SELECT payload FROM gb_cache WHERE key = ?", (key,)).fetchone()
                    if row:
                        conn.execute("UPDATE gb_cache SET hits = hits + 1 WHERE key = ?", (key,))
                        conn.commit()
                finally:
                    conn.close()
                if row:
                    self.hits += 1
                    if self._in_process:
                        self._memo[key] = row[0]
                    return row[0]
            self.misses += 1
            return None

    def put(self, key: str, field: str, n_generators: int, payload: str) -> None:
        with self._lock:
            if self._in_process:
                self._memo[key] = payload
            if self.db_path:
                conn = sqlite3.connect(self.db_path)
                try:
                    conn.execute(
                        "INSERT OR REPLACE INTO gb_cache (key, field, n_generators, payload, created_ts, hits) "
                        "VALUES (?, ?, ?, ?, ?, 0)",
                        (key, field, n_generators, payload, datetime.now(timezone.utc).isoformat(timespec="seconds")),
                    )
                    conn.commit()
                finally:
                    conn.close()

    def __len__(self) -> int:
        with self._lock:
            if self.db_path:
                conn = sqlite3.connect(self.db_path)
                try:
                    return conn.execute("SELECT COUNT(*) FROM gb_cache").fetchone()[0]
                finally:
                    conn.close()
            return len(self._memo)


_CACHE_LOCK = threading.Lock()
_CACHE: Dict[str, Optional[GroebnerCache]] = {"instance": None}


def get_cache() -> Optional[GroebnerCache]:
    """engine.cache 关闭时返回 None"""
    engine = get_engine_config()
    if not engine["cache"]:
        return None
    with _CACHE_LOCK:
        if _CACHE["instance"] is None:
            _CACHE["instance"] = GroebnerCache(engine["cache_dir"], engine["memo_in_process"])
        return _CACHE["instance"]


def reset_cache() -> None:
    with _CACHE_LOCK:
        _CACHE["instance"] = None
