import sys
from pathlib import Path
from typing import Optional, TextIO

from models.dtos import CommandResponse
from views.common import get_logger

logger = get_logger("Console")


def render_response(response: CommandResponse, out: Optional[Path] = None, stream: Optional[TextIO] = None) -> int:
    """Writes the payload to `out` (or stdout) and returns the exit code"""
    if response.payload is not None:
        text = response.payload if response.payload.endswith("\n") else response.payload + "\n"
        if out is not None:
            out = Path(out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8")
            logger.info(f"Wrote {out}")
        else:
            (stream or sys.stdout).write(text)

    if response.success:
        logger.info(response.message)
    elif response.error_type == "violation":
        logger.warning(response.message)
    else:
        print(f"error: {response.message}", file=sys.stderr)
    return response.exit_code
