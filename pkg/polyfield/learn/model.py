"""
Learned models and their JSON file format.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import ConfigError
from ..poly import MultiPoly, PolyVec
from ..semialg import BasicSemialgebraicSet
from ..sideinfo import ResidualReport
from ..sos import CertificateReport, PutinarCertificate, verify_certificate
from ..types import SideInfoTag, SolveStatus

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class ModelCertificate:
    """A Putinar certificate together with what it certifies."""

    name: str
    certificate: PutinarCertificate
    target: MultiPoly
    domain: BasicSemialgebraicSet
    report: Optional[CertificateReport] = None

    def verify(self) -> CertificateReport:
        self.report = verify_certificate(self.certificate, self.target, self.domain)
        return self.report

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "digest": self.certificate.digest(),
            "target": self.target.to_pairs(),
            "set": self.domain.to_json(),
            "certificate": self.certificate.to_json(),
            "report": None if self.report is None else self.report.to_json(),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any], n: int) -> "ModelCertificate":
        report = data.get("report")
        return cls(
            data["name"],
            PutinarCertificate.from_json(data["certificate"], n),
            MultiPoly.from_pairs(data["target"], n),
            BasicSemialgebraicSet.from_json(data["set"]),
            None
            if report is None
            else CertificateReport(report["max_residual"], report["min_eigenvalue"]),
        )


@dataclass
class LearnedModel:
    """
    Result of a fit.

    Attributes:
        field: Learned polynomial vector field
        degree: Candidate degree
        objective: Loss recomputed from the field and the data
        status: Solver status; anything but OPTIMAL marks a best iterate
        gap: Solver duality gap
        certificates: One entry per SOS block
        potential: Learned V (gradient) or H (Hamiltonian), if imposed
        residuals: Residual reports of the imposed side information
        side_info: Tags of the imposed side information, in order
        fingerprint: Hash of the canonical problem description
        iterations: Solver iterations
    """

    field: PolyVec
    degree: int
    objective: float
    status: SolveStatus = SolveStatus.OPTIMAL
    gap: float = 0.0
    certificates: List[ModelCertificate] = field(default_factory=list)
    potential: Optional[MultiPoly] = None
    residuals: List[ResidualReport] = field(default_factory=list)
    side_info: List[SideInfoTag] = field(default_factory=list)
    fingerprint: str = ""
    iterations: int = 0

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL

    def verify_certificates(self) -> List[CertificateReport]:
        return [c.verify() for c in self.certificates]

    def to_json(self) -> Dict[str, Any]:
        return {
            "version": FORMAT_VERSION,
            "n": self.n,
            "degree": self.degree,
            "field": self.field.to_pairs(),
            "potential": None if self.potential is None else self.potential.to_pairs(),
            "objective": self.objective,
            "status": self.status.value,
            "gap": self.gap,
            "iterations": self.iterations,
            "side_info": [t.value for t in self.side_info],
            "residuals": [r.to_json() for r in self.residuals],
            "certificates": [c.to_json() for c in self.certificates],
            "fingerprint": self.fingerprint,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LearnedModel":
        """
        Decode a model file.

        Raises:
            ConfigError: If the content is not a model description
        """
        try:
            n = int(data["n"])
            potential = data.get("potential")
            return cls(
                field=PolyVec.from_pairs(data["field"], n),
                degree=int(data["degree"]),
                objective=float(data["objective"]),
                status=SolveStatus(data.get("status", SolveStatus.OPTIMAL.value)),
                gap=float(data.get("gap", 0.0)),
                certificates=[ModelCertificate.from_json(c, n) for c in data.get("certificates", [])],
                potential=None if potential is None else MultiPoly.from_pairs(potential, n),
                residuals=[ResidualReport.from_json(r) for r in data.get("residuals", [])],
                side_info=[SideInfoTag(t) for t in data.get("side_info", [])],
                fingerprint=data.get("fingerprint", ""),
                iterations=int(data.get("iterations", 0)),
            )
        except (KeyError, TypeError, ValueError) as error:
            raise ConfigError(f"Malformed model file: {error}") from error

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True))
        logger.info(f"Saved learned model to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "LearnedModel":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError(f"Cannot read model file {path}: {error}") from error
        return cls.from_json(data)
