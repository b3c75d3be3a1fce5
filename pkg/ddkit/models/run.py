from sqlalchemy import Boolean, Column, Float, Integer, String, TIMESTAMP, func

from ddkit.database import Base


class RunRecord(Base):
    """
    One finished `run` invocation

    Attributes:
        id (int): primary key
        config_hash (str): sha256 of the canonical experiment config
        engine (str): spinboson, finitebath, noise or protect
        family (str): sequence family, e.g. udd
        order (int): sequence order parameter n
        metric (str): swept column that was fitted
        claimed_order (float): exponent the run was checked against
        slope (float): fitted exponent, null for an invalid fit
        r_squared (float): fit quality
        points_used (int): points inside the fit window
        passed (bool): verdict of the run
        created_at (datetime): insertion time, defaults to the current time
    """

    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, index=True)
    config_hash = Column(String(64), nullable=False, index=True)
    engine = Column(String(32), nullable=False)
    family = Column(String(32), nullable=False)
    order = Column(Integer, nullable=False)
    metric = Column(String(64), nullable=False)
    claimed_order = Column(Float, nullable=False)
    slope = Column(Float, nullable=True)
    r_squared = Column(Float, nullable=False)
    points_used = Column(Integer, nullable=False)
    passed = Column(Boolean, default=False)
    created_at = Column(TIMESTAMP, server_default=func.now())
