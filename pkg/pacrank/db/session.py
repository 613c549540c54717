# pacrank/db/session.py
import logging
import pathlib
from functools import lru_cache
from typing import Iterator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine, make_url
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session, sessionmaker

from pacrank.db.models import Base
from pacrank.utils.errors import ExportError
from pacrank.utils.settings import get_settings

logger = logging.getLogger(__name__)


def get_engine(database_url: Optional[str] = None) -> Engine:
    return _engine(database_url or get_settings().database_url)


@lru_cache(maxsize=8)
def _engine(database_url: str) -> Engine:
    url = make_url(database_url)
    if url.get_backend_name() == "sqlite" and url.database and url.database != ":memory:":
        # sqlite creates the file but not its folder
        pathlib.Path(url.database).parent.mkdir(parents=True, exist_ok=True)
    return create_engine(url, echo=False, future=True)


def init_db(database_url: Optional[str] = None) -> Engine:
    """Create the tables on first use."""
    engine = get_engine(database_url)
    try:
        Base.metadata.create_all(engine)
    except SQLAlchemyError as exc:
        raise ExportError(engine.url.render_as_string(hide_password=True), str(exc)) from exc
    logger.debug("results store ready at %s", engine.url.render_as_string(hide_password=True))
    return engine


def get_db(database_url: Optional[str] = None) -> Iterator[Session]:
    """Yield a session on an initialised store and close it afterwards."""
    SessionLocal = sessionmaker(bind=init_db(database_url), expire_on_commit=False, autoflush=False)
    session = SessionLocal()
    try:
        yield session
    finally:
        session.close()
