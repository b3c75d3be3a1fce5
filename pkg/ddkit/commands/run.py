import argparse
import json
import logging
from pathlib import Path

import numpy as np
from sqlalchemy.exc import SQLAlchemyError

from ddkit import database
from ddkit.database import get_db
from ddkit.exceptions import CommandError, ConfigError, DDKitError
from ddkit.experiments import load_config, run_experiment
from ddkit.utils import frame_to_csv, remove_outputs, resolve_threads, save_run_record, write_outputs

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("run", help="run a JSON experiment config and fit its sweep")
    parser.add_argument("config", type=Path, help="experiment config (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="replace every seed in the config")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (CLI > DDKIT_THREADS > 1)")
    parser.set_defaults(handler=cmd_run)


def cmd_run(args: argparse.Namespace) -> int:
    """
    Sweep, fit and report one experiment

    Writes the sweep CSV, the JSON report and, for spinboson configs that ask for it, a
    coherence trace. Output paths resolve against the config's directory.

    Args:
        args (argparse.Namespace): config path, seed and thread overrides

    Returns:
        int: 0 when the fitted slope lies in the configured band, 1 otherwise

    Raises:
        CommandError: exit 2 for config errors, exit 1 for numeric failures
    """
    try:
        config, base = load_config(args.config, seed=args.seed)
    except ConfigError as e:
        raise CommandError(exit_code=2, detail=str(e))

    outputs = {"csv": base / config.output.csv, "report": base / config.output.report}
    if config.output.trace is not None:
        outputs["trace"] = base / config.output.trace

    try:
        result = run_experiment(config, base, threads=resolve_threads(args.threads))
        contents = {
            outputs["csv"]: frame_to_csv(result.sweep, result.provenance),
            outputs["report"]: json.dumps(result.report.model_dump(mode="json", by_alias=True), indent=2, sort_keys=True) + "\n",
        }
        if result.trace is not None:
            contents[outputs["trace"]] = frame_to_csv(result.trace, result.provenance)
        write_outputs(contents)
    except ConfigError as e:
        remove_outputs(outputs.values())
        raise CommandError(exit_code=2, detail=str(e))
    except (DDKitError, np.linalg.LinAlgError, FloatingPointError) as e:
        logger.error(f"Run failed: {e}")
        remove_outputs(outputs.values())
        raise CommandError(exit_code=1, detail=f"numeric failure: {e}")

    if database.DATABASE_URL:
        db_session = get_db(database.DATABASE_URL)
        try:
            db = next(db_session)
            save_run_record(db, result.report, result.provenance["config_sha256"], config.sequence.n)
        except SQLAlchemyError as e:
            logger.error(f"Recording the run in the ledger failed: {e}")
            raise CommandError(exit_code=1, detail=f"outputs written, but the ledger write failed: {e}")
        finally:
            db_session.close()

    return 0 if result.report.passed else 1
