from typing import Annotated, Iterator, Optional

from pydantic import BaseModel, Field

from .AdmissiblePartition import AdmissiblePartition
from .Space import Space


class CertificateNode(BaseModel):
    """A node of a norming tree: either a leaf (``index`` set) or a split (``parts`` and ``children`` set)."""

    index: Annotated[Optional[int], Field(default=None, description="Leaf: the coordinate whose modulus is taken.")]
    parts: Annotated[Optional[AdmissiblePartition], Field(
        default=None, description="Split: the admissible family E_1 < ... < E_k, checked on load.")]
    children: Annotated[Optional[list["CertificateNode"]], Field(
        default=None, description="Split: one subtree per part, evaluated on the restriction to that part.")]
    value: Annotated[float, Field(description="Value of the node as recorded by the producer.")]

    @property
    def is_leaf(self) -> bool:
        return self.index is not None

    def walk(self, depth: int = 0) -> Iterator[tuple["CertificateNode", int]]:
        """Pre-order traversal yielding (node, number of splits above it)."""
        yield self, depth
        for child in self.children or ():
            yield from child.walk(depth + 1)

    def leaves(self) -> Iterator[tuple[int, int]]:
        """Yields (coordinate index, depth) for every leaf."""
        for node, depth in self.walk():
            if node.is_leaf:
                yield node.index, depth

    def to_json(self) -> dict:
        return self.model_dump(exclude_none=True)


class NormCertificate(BaseModel):
    """A tree of nested admissible partitions witnessing a computed norm value."""

    mode: Annotated[Space, Field(description="Norm the tree certifies, 't' or 't2'.")]
    root: Annotated[CertificateNode, Field(description="Root of the norming tree.")]
    value: Annotated[float, Field(ge=0.0, description="Certified value.")]

    def to_json(self) -> dict:
        return {"mode": self.mode.value, "value": self.value, "root": self.root.to_json()}


CertificateNode.model_rebuild()
