from typing import Dict, List, Optional

from pydantic import BaseModel, computed_field

from app.modules.qexp.models import ExpectationRecord

CHECK_NAMES = (
    "engines",
    "duality",
    "double_dual",
    "order",
    "milnor",
    "psi",
    "steenbrink",
    "palindrome",
    "parity",
    "hodge_symmetry",
    "variance",
    "pairs",
    "expect",
)


class CorpusEntry(BaseModel):
    name: str
    poly: str
    group: str
    expectations: Optional[ExpectationRecord] = None
    line: int = 0


class EntryResult(BaseModel):
    """Check name -> True / False, or None when the check does not apply to the pair."""
    name: str
    polynomial: str
    group: str
    order: int = 0
    checks: Dict[str, Optional[bool]] = {}
    failures: List[str] = []
    error: Optional[str] = None

    @computed_field
    @property
    def passed(self) -> bool:
        return self.error is None and all(v is not False for v in self.checks.values())


class CorpusSummary(BaseModel):
    source: str
    total: int
    passed: int
    failed: int
    entries: List[EntryResult]
