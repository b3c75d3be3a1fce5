"""
    Purpose: SQLAlchemy models of the run ledger, the only persistent state of the toolkit
    Each `run` can leave one row behind so acceptance results can be compared over time

    Usage: enable the ledger with DDKIT_DATABASE_URL; `run` writes RunRecord rows and
    `history` reads them back through the RunRecordOut schema
"""
from .run import RunRecord
