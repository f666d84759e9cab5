#!/usr/bin/env python3
"""
导出目录曲线文件
用法: python tools/export_catalog.py [DIR]   (默认 catalog.data_dir, 即 data/curves)
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from core.catalog import export_catalog  # noqa: E402
from core.config_utils import get_catalog_config  # noqa: E402


def main():
    directory = sys.argv[1] if len(sys.argv) > 1 else get_catalog_config()["data_dir"]
    paths = export_catalog(directory)
    for p in paths:
        print(f"  ✅ {p}")
    print(f"📁 共 {len(paths)} 个文件")


if __name__ == "__main__":
    main()
