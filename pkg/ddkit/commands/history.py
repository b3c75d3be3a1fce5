import argparse
import sys

import pandas as pd

from ddkit import database
from ddkit.database import get_db
from ddkit.exceptions import CommandError
from ddkit.schemas import RunRecordOut
from ddkit.utils import frame_to_csv, list_run_records


def register(subparsers):
    parser = subparsers.add_parser("history", help="list recorded runs from the ledger")
    parser.add_argument("--database-url", default=None, help="ledger URL (default DDKIT_DATABASE_URL)")
    parser.add_argument("--limit", type=int, default=50)
    parser.set_defaults(handler=cmd_history)


def cmd_history(args: argparse.Namespace) -> int:
    """Newest ledger rows first, as CSV."""
    url = args.database_url or database.DATABASE_URL
    if not url:
        raise CommandError(exit_code=2, detail="no ledger configured; set DDKIT_DATABASE_URL or pass --database-url")
    db_session = get_db(url)
    db = next(db_session)
    try:
        records = list_run_records(db, args.limit)
    finally:
        db_session.close()
    frame = pd.DataFrame([r.model_dump(mode="json") for r in records], columns=list(RunRecordOut.model_fields))
    sys.stdout.write(frame_to_csv(frame))
    return 0
