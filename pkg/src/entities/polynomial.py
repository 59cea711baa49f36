from sqlalchemy import Column, Integer, String, Text, UniqueConstraint

from ..database.core import Base


class CachedPolynomial(Base):
    __tablename__ = "double_polynomials"
    __table_args__ = (UniqueConstraint("kind", "n", "images", name="uq_kind_n_images"),)

    id = Column(Integer, primary_key=True, index=True)
    kind = Column(String, nullable=False, index=True)
    n = Column(Integer, nullable=False)
    images = Column(String, nullable=False)
    payload = Column(Text, nullable=False)

    def __repr__(self):
        return f"<CachedPolynomial(kind={self.kind}, n={self.n}, images={self.images})>"
