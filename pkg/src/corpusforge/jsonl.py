"""Line-oriented JSON reading and writing.

All files are UTF-8 with LF line endings and one object per line, so
re-running a stage on identical input produces byte-identical output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def write_records(path: str | Path, objs: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for obj in objs:
            fh.write(dumps(obj))
            fh.write("\n")
            count += 1
    return count


def read_records(path: str | Path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
