from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar
import hashlib
import json
import os

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from sqlalchemy.orm import Session

from ddkit import __version__
from .models import RunRecord
from .schemas import FitReport, RunRecordOut

import logging

logger = logging.getLogger(__name__)

# Load environment variables from .env file
load_dotenv()

# Worker threads for sweep points and the root log level
DEFAULT_THREADS = int(os.getenv("DDKIT_THREADS", 1))
LOG_LEVEL = os.getenv("DDKIT_LOG_LEVEL", "INFO")

T = TypeVar("T")
R = TypeVar("R")


def configure_logging(level: Optional[str] = None):
    """Send log records to stderr; stdout carries CSV."""
    logging.basicConfig(level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO))


##################### SEEDING AND PARALLEL SWEEPS #####################

def realization_rng(seed: int, index: int) -> np.random.Generator:
    """
    Independent generator for realization `index` of a run seeded with `seed`

    The stream depends only on (seed, index), never on which worker draws it.
    """
    return np.random.default_rng([int(seed), int(index)])


def resolve_threads(cli_value: Optional[int] = None) -> int:
    """CLI value, then DDKIT_THREADS, then 1."""
    threads = cli_value if cli_value is not None else DEFAULT_THREADS
    return max(1, int(threads))


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """map() over a thread pool; results come back in input order."""
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


##################### PROVENANCE AND OUTPUT FILES #####################

def config_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def provenance(config_digest: str, seed: Optional[int], extra: Optional[Dict[str, object]] = None) -> Dict[str, object]:
    fields: Dict[str, object] = {"tool": f"ddkit {__version__}", "config_sha256": config_digest, "seed": seed}
    fields.update(extra or {})
    return fields


def provenance_lines(fields: Dict[str, object]) -> str:
    return "".join(f"# {key}={value}\n" for key, value in fields.items())


def frame_to_csv(frame: pd.DataFrame, fields: Optional[Dict[str, object]] = None) -> str:
    """CSV text with 17 significant digits, preceded by '#' provenance lines."""
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return (provenance_lines(fields) if fields else "") + body


def write_outputs(contents: Dict[Path, str]):
    """
    Write every file or none of them

    Each file goes to a temporary sibling first; the renames happen only after all
    writes succeeded, and temporaries are removed on failure.

    Args:
        contents (Dict[Path, str]): destination path -> text
    """
    staged = []
    try:
        for path, text in contents.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(f".{path.name}.partial")
            tmp.write_text(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    except Exception as e:
        logger.error(f"Writing outputs failed: {e}")
        for tmp, path in staged:
            tmp.unlink(missing_ok=True)
        raise


def remove_outputs(paths: Iterable[Path]):
    for path in paths:
        Path(path).unlink(missing_ok=True)


##################### RUN LEDGER #####################

def save_run_record(db: Session, report: FitReport, digest: str, order: int) -> RunRecord:
    """
    Store the verdict of a finished run

    Args:
        db (Session): ledger session
        report (FitReport): the report written next to the sweep
        digest (str): config hash
        order (int): sequence order parameter

    Returns:
        RunRecord: the committed row
    """
    record = RunRecord(
        config_hash=digest,
        engine=report.engine,
        family=report.family,
        order=order,
        metric=report.metric,
        claimed_order=report.claimed_order,
        slope=report.slope,
        r_squared=report.r_squared,
        points_used=report.points_used,
        passed=report.passed,
    )
    try:
        db.add(record)
        db.commit()
        db.refresh(record)
        logger.info(f"Run recorded with id {record.id}")
    except Exception as e:
        db.rollback()
        logger.error(f"Error saving run record: {str(e)}")
        raise
    return record


def list_run_records(db: Session, limit: int = 50) -> List[RunRecordOut]:
    rows = db.query(RunRecord).order_by(RunRecord.id.desc()).limit(limit).all()
    return [RunRecordOut.model_validate(row) for row in rows]
