"""Process-wide memory budget for large tables.

The budget is read from ZETACONV_MEM_MB (megabytes, default 1024) once per
lookup so tests can adjust it with monkeypatch. Table constructors refuse
work that would exceed it instead of thrashing.
"""

from __future__ import annotations

import os

DEFAULT_MB = 1024
ENV_VAR = "ZETACONV_MEM_MB"


def budget_bytes() -> int:
    raw = os.environ.get(ENV_VAR, "")
    try:
        mb = int(raw) if raw else DEFAULT_MB
    except ValueError:
        mb = DEFAULT_MB
    return max(mb, 1) * 1024 * 1024


def max_table_rows() -> int:
    """Largest convolution-table length the budget allows.

    Sized at ~100 bytes per retained integer (exact count object plus float
    columns), which matches measured usage for n up to 256.
    """
    return budget_bytes() // 100
