import asyncio
import json
import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from app.core.config import config
from app.modules.corpus.models import CHECK_NAMES, CorpusEntry, CorpusSummary, EntryResult
from app.modules.efunction.basis.viewmodel import EFunctionError, basis_viewmodel
from app.modules.efunction.series.viewmodel import series_viewmodel
from app.modules.group.models import AbelianSubgroup
from app.modules.group.viewmodel import MODE_G0, MODE_SL, GroupError, group_viewmodel
from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import PolynomialError, poly_viewmodel
from app.modules.qexp.models import BiExpPolynomial, ExpectationRecord
from app.modules.qexp.viewmodel import QExpError, qexp_viewmodel

logger = logging.getLogger("bhmirror.modules.corpus")

ALL_SUBGROUPS = "*"


class CorpusError(Exception):
    """Base exception for Corpus module."""
    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(message)


class CorpusFormatError(CorpusError):
    """Raised when a corpus line does not follow `name ; poly ; group [; expectations]`."""
    def __init__(self, message: str, line: Optional[int] = None, code: Optional[str] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message, code)


@lru_cache(maxsize=None)
def _polynomial_checks(f: InvertiblePolynomial) -> Dict[str, bool]:
    """Checks that depend on f alone, shared by every group entry of the same polynomial."""
    ft = poly_viewmodel.transpose(f)
    trivial = group_viewmodel.trivial_group(f)
    untwisted = basis_viewmodel.efunction_basis(f, trivial)
    closed = basis_viewmodel.steenbrink_closed_form(f)
    return {
        "milnor": basis_viewmodel.milnor_counts_ok(f),
        "psi": all(
            basis_viewmodel.psi_structure(h, atom).passed
            for h in (f, ft)
            for atom in poly_viewmodel.decompose(h)
        ),
        "steenbrink": qexp_viewmodel.equals(untwisted, closed)
        and basis_viewmodel.steenbrink_identity_holds(f, untwisted),
        "palindrome": basis_viewmodel.palindromic(f),
    }


@lru_cache(maxsize=None)
def _engines(f: InvertiblePolynomial, G: AbelianSubgroup) -> Tuple[BiExpPolynomial, BiExpPolynomial, BiExpPolynomial]:
    return (
        basis_viewmodel.efunction_basis(f, G),
        series_viewmodel.efunction_series(f, G),
        basis_viewmodel.efunction_pairs(f, G),
    )


class CorpusViewModel:

    def parse_corpus(self, text: str) -> List[CorpusEntry]:
        entries = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [part.strip() for part in line.split(";", 3)]
            if len(fields) < 3 or not all(fields[:3]):
                raise CorpusFormatError("expected `name ; poly ; group-spec [; expectations]`", line=number)
            expectations = None
            if len(fields) == 4 and fields[3]:
                try:
                    expectations = ExpectationRecord.model_validate(json.loads(fields[3]))
                except (json.JSONDecodeError, ValidationError) as e:
                    raise CorpusFormatError(f"bad expectations: {e}", line=number)
            entries.append(CorpusEntry(name=fields[0], poly=fields[1], group=fields[2], expectations=expectations, line=number))
        return entries

    def load_corpus(self, path: Optional[Path] = None) -> List[CorpusEntry]:
        path = Path(path or config.CORPUS_FILE)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CorpusError(f"cannot read corpus file {path}: {e}", code="NO_FILE")
        entries = self.parse_corpus(text)
        logger.info(f"Loaded {len(entries)} corpus lines from {path}")
        return entries

    def expand(self, entry: CorpusEntry) -> List[Tuple[str, InvertiblePolynomial, AbelianSubgroup]]:
        f = poly_viewmodel.polynomial(entry.poly)
        if entry.group.strip() == ALL_SUBGROUPS:
            groups = group_viewmodel.all_subgroups(f)
            return [(f"{entry.name}#{i}", f, G) for i, G in enumerate(groups)]
        return [(entry.name, f, group_viewmodel.parse_group(f, entry.group))]

    def check_expectations(self, expectations: ExpectationRecord, P: BiExpPolynomial, f, G, modes) -> List[str]:
        failures = []
        if expectations.efunction is not None and not qexp_viewmodel.equals(qexp_viewmodel.from_json(expectations.efunction), P):
            failures.append("efunction")
        if expectations.chi is not None and expectations.chi != qexp_viewmodel.chi(P):
            failures.append("chi")
        if expectations.variance is not None:
            table = basis_viewmodel.hodge_table(f, G)
            if Fraction(expectations.variance) != qexp_viewmodel.variance(table, modes):
                failures.append("variance")
        return failures

    def run_pair(
        self, name: str, f: InvertiblePolynomial, G: AbelianSubgroup, expectations: Optional[ExpectationRecord] = None
    ) -> EntryResult:
        result = EntryResult(name=name, polynomial=f.to_text(), group=G.describe(), order=G.order)
        checks: Dict[str, Optional[bool]] = {key: None for key in CHECK_NAMES}
        try:
            ft = poly_viewmodel.transpose(f)
            Gt = group_viewmodel.dual_group(f, G)
            modes = group_viewmodel.mode_of(G)

            P, S, R = _engines(f, G)
            Q, Qs, Qr = _engines(ft, Gt)
            checks["engines"] = P == S == R and Q == Qs == Qr
            checks["duality"] = qexp_viewmodel.check_duality(P, Q, f.n)

            double_dual = group_viewmodel.dual_group(ft, Gt).same_elements(G)
            if G.same_elements(group_viewmodel.g0_subgroup(f)):
                double_dual = double_dual and Gt.same_elements(group_viewmodel.sl_subgroup(ft))
            checks["double_dual"] = double_dual
            checks["order"] = G.order * Gt.order == poly_viewmodel.det(f)
            checks.update(_polynomial_checks(f))

            table = basis_viewmodel.hodge_table(f, G)
            if modes:
                checks["parity"] = qexp_viewmodel.parity_disjoint(table) and all(
                    qexp_viewmodel.equals(qexp_viewmodel.e_to_hodge(table, mode), P)
                    and qexp_viewmodel.hodge_from_e(P, f.n, mode) == table
                    for mode in sorted(modes)
                )
            if MODE_SL in modes:
                checks["hodge_symmetry"] = qexp_viewmodel.hodge_symmetric(table, basis_viewmodel.hodge_table(ft, Gt))
            if MODE_G0 in modes:
                checks["variance"] = qexp_viewmodel.variance_corollary_holds(f, table, modes)

            pairs = basis_viewmodel.pair_table(f, G)
            dual_pairs = basis_viewmodel.pair_table(ft, Gt)
            checks["pairs"] = (
                dual_pairs.as_dict() == pairs.transposed()
                and basis_viewmodel.pair_sign_law(pairs)
                and basis_viewmodel.pair_multiplicities_ok(f, pairs)
            )

            if expectations is not None:
                missed = self.check_expectations(expectations, P, f, G, modes)
                checks["expect"] = not missed
                result.failures.extend(f"expect.{key}" for key in missed)
        except (PolynomialError, GroupError, QExpError, EFunctionError) as e:
            logger.error(f"Corpus entry {name} raised: {e}")
            result.error = f"{type(e).__name__}: {e}"
        result.checks = checks
        result.failures = [key for key, ok in checks.items() if ok is False] + result.failures
        if result.passed:
            logger.debug(f"Corpus entry {name}: PASS")
        else:
            logger.warning(f"Corpus entry {name}: FAIL {result.failures or result.error}")
        return result

    async def run_corpus(self, entries: List[CorpusEntry], source: str = "") -> CorpusSummary:
        if not entries:
            logger.warning("Corpus has zero entries.")
            return CorpusSummary(source=source, total=0, passed=0, failed=0, entries=[])

        expanded = []
        for entry in entries:
            try:
                pairs = self.expand(entry)
            except (PolynomialError, GroupError) as e:
                logger.warning(f"Corpus entry {entry.name} (line {entry.line}) rejected: {e}")
                expanded.append(EntryResult(
                    name=entry.name, polynomial=entry.poly, group=entry.group, error=f"{type(e).__name__}: {e}"
                ))
                continue
            for name, f, G in pairs:
                expanded.append((name, f, G, entry.expectations))

        semaphore = asyncio.Semaphore(config.CORPUS_WORKERS)

        async def worker(item):
            if isinstance(item, EntryResult):
                return item
            async with semaphore:
                return await asyncio.to_thread(self.run_pair, *item)

        results = await asyncio.gather(*(worker(item) for item in expanded))
        passed = sum(1 for r in results if r.passed)
        logger.info(f"Corpus finished: {passed}/{len(results)} entries pass")
        return CorpusSummary(
            source=source, total=len(results), passed=passed, failed=len(results) - passed, entries=list(results)
        )

    def render_matrix(self, summary: CorpusSummary) -> str:
        width = max([len(e.name) for e in summary.entries] + [5])
        header = "entry".ljust(width) + "  " + "  ".join(CHECK_NAMES) + "  result"
        lines = [header]
        for e in summary.entries:
            cells = []
            for key in CHECK_NAMES:
                value = e.checks.get(key)
                mark = "-" if value is None else ("PASS" if value else "FAIL")
                cells.append(mark.center(len(key)))
            verdict = "PASS" if e.passed else "FAIL"
            line = e.name.ljust(width) + "  " + "  ".join(cells) + "  " + verdict
            if e.error:
                line += f"  ({e.error})"
            lines.append(line)
        lines.append(f"{summary.passed}/{summary.total} entries pass")
        return "\n".join(lines)


corpus_viewmodel = CorpusViewModel()
