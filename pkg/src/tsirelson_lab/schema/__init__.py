from .AdmissiblePartition import AdmissiblePartition, is_admissible
from .BoundPair import BoundPair
from .FinVector import FinVector
from .GaussianConfig import GaussianConfig
from .IndexSet import Explicit, IndexSet, Interval
from .NormCertificate import CertificateNode, NormCertificate
from .NormResult import NormResult
from .ProbeReport import CSV_COLUMNS, ProbeReport, ProbeRow
from .RunConfig import Command, RunConfig
from .Space import Space
from .SymNormResult import SymNormResult
from .VectorFamily import VectorFamily

__all__ = [
    "FinVector",
    "Interval",
    "Explicit",
    "IndexSet",
    "AdmissiblePartition",
    "is_admissible",
    "CertificateNode",
    "NormCertificate",
    "NormResult",
    "SymNormResult",
    "BoundPair",
    "GaussianConfig",
    "VectorFamily",
    "ProbeRow",
    "ProbeReport",
    "CSV_COLUMNS",
    "Command",
    "RunConfig",
    "Space",
]
