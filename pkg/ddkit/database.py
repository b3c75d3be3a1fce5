from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# URL of the optional run ledger; nothing is recorded when it is unset
DATABASE_URL = os.getenv("DDKIT_DATABASE_URL")

# Create a Base class for the models to inherit from
Base = declarative_base()


def make_session_factory(url: str):
    """
    Build a session factory for the ledger at `url` and create missing tables

    Args:
        url (str): SQLAlchemy database URL, e.g. sqlite:///runs.db

    Returns:
        sessionmaker: configured "Session" class bound to a new engine
    """
    engine = create_engine(url)
    # import registers the tables on Base.metadata
    from ddkit import models  # noqa: F401

    Base.metadata.create_all(bind=engine)
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


def get_db(url: str = None):
    """
    Yield a ledger session and close it afterwards

    Args:
        url (str, optional): database URL, defaults to DDKIT_DATABASE_URL

    Yields:
        db (Session): a new database session
    """
    SessionLocal = make_session_factory(url or DATABASE_URL)
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()
