import logging

from app.core.config import config
from app.core.utils import EXIT_VERIFICATION, CommandGroup, CommandResult
from app.modules.efunction.basis.models import PairsReport
from app.modules.efunction.basis.viewmodel import basis_viewmodel
from app.modules.efunction.series.viewmodel import series_viewmodel
from app.modules.group.commands import GROUP_ARGUMENT, POLY_ARGUMENT, load_pair
from app.modules.group.models import AbelianSubgroup
from app.modules.group.viewmodel import MODE_G0, group_viewmodel
from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.models import (
    BiExpPolynomial,
    DualityReport,
    EFunctionReport,
    HodgeReport,
    HodgeRow,
    VarianceReport,
)
from app.modules.qexp.viewmodel import qexp_viewmodel

logger = logging.getLogger("bhmirror.modules.efunction")

efunction_commands = CommandGroup("efunction")

ENGINE_ARGUMENT = (
    ("--engine",),
    {"choices": ["basis", "series", "both"], "default": config.DEFAULT_ENGINE, "help": "computation engine"},
)


class EngineMismatch(Exception):
    def __init__(self, basis: BiExpPolynomial, series: BiExpPolynomial):
        self.basis = basis
        self.series = series
        super().__init__("basis and series engines disagree")


def compute_efunction(f: InvertiblePolynomial, G: AbelianSubgroup, engine: str) -> BiExpPolynomial:
    if engine == "basis":
        return basis_viewmodel.efunction_basis(f, G)
    if engine == "series":
        return series_viewmodel.efunction_series(f, G)
    P = basis_viewmodel.efunction_basis(f, G)
    S = series_viewmodel.efunction_series(f, G)
    if not qexp_viewmodel.equals(P, S):
        raise EngineMismatch(P, S)
    return P


def _mismatch(e: EngineMismatch) -> CommandResult:
    logger.error(f"Engine mismatch: basis={qexp_viewmodel.to_text(e.basis)} series={qexp_viewmodel.to_text(e.series)}")
    return CommandResult.fail(
        EXIT_VERIFICATION,
        "Engines disagree.",
        details=f"basis: {qexp_viewmodel.to_pretty(e.basis)}; series: {qexp_viewmodel.to_pretty(e.series)}",
    )


@efunction_commands.command(
    "efunction", help="Orbifold E-function E(f,G)(t,tb).", arguments=[POLY_ARGUMENT, GROUP_ARGUMENT, ENGINE_ARGUMENT]
)
def efunction(args) -> CommandResult:
    logger.info(f"efunction called for: {args.poly} with group {args.group}, engine {args.engine}")
    f, G = load_pair(args)
    try:
        P = compute_efunction(f, G, args.engine)
    except EngineMismatch as e:
        return _mismatch(e)
    report = EFunctionReport(
        polynomial=f.to_text(),
        group=G.describe(),
        engine=args.engine,
        efunction=qexp_viewmodel.to_pretty(P),
        canonical=qexp_viewmodel.to_text(P),
        json_terms=qexp_viewmodel.to_json(P),
        chi=qexp_viewmodel.chi(P),
        engines_agree=True if args.engine == "both" else None,
    )
    return CommandResult.ok("E-function computed.", report.model_dump(), report.efunction)


@efunction_commands.command(
    "check-duality",
    help="Check E(f,G)(t,tb) = (-1)^n E(f~,G~)(1/t,tb).",
    arguments=[POLY_ARGUMENT, GROUP_ARGUMENT, ENGINE_ARGUMENT],
)
def check_duality(args) -> CommandResult:
    logger.info(f"check-duality called for: {args.poly} with group {args.group}")
    f, G = load_pair(args)
    ft = poly_viewmodel.transpose(f)
    Gt = group_viewmodel.dual_group(f, G)
    details = None
    try:
        P = compute_efunction(f, G, args.engine)
        Q = compute_efunction(ft, Gt, args.engine)
        agree = True
    except EngineMismatch as e:
        P = Q = e.basis
        agree = False
        details = str(e)
    passed = agree and qexp_viewmodel.check_duality(P, Q, f.n)
    report = DualityReport(
        polynomial=f.to_text(),
        group=G.describe(),
        transpose=ft.to_text(),
        dual_group=Gt.describe(),
        n=f.n,
        efunction=qexp_viewmodel.to_pretty(P),
        dual_efunction=qexp_viewmodel.to_pretty(Q),
        engines_agree=agree,
        passed=passed,
        details=details,
    )
    text = "\n".join([
        f"E(f,G):   {report.efunction}",
        f"E(f~,G~): {report.dual_efunction}   [f~ = {report.transpose}, G~ = <{report.dual_group}>]",
        "PASS" if passed else "FAIL",
    ])
    if not passed:
        return CommandResult.fail(EXIT_VERIFICATION, "Duality check failed.", details=details, data=report.model_dump(), text=text)
    return CommandResult.ok("Duality check passed.", report.model_dump(), text)


@efunction_commands.command("hodge", help="Orbifold Hodge table h^{p,q}.", arguments=[POLY_ARGUMENT, GROUP_ARGUMENT])
def hodge(args) -> CommandResult:
    logger.info(f"hodge called for: {args.poly} with group {args.group}")
    f, G = load_pair(args)
    table = basis_viewmodel.hodge_table(f, G)
    rows = [HodgeRow(p=str(e.p), q=str(e.q), dim_even=e.dim_even, dim_odd=e.dim_odd, h=e.h) for e in table.entries]
    report = HodgeReport(
        polynomial=f.to_text(),
        group=G.describe(),
        n=f.n,
        modes=sorted(group_viewmodel.mode_of(G)),
        rows=rows,
        parity_disjoint=qexp_viewmodel.parity_disjoint(table),
    )
    lines = ["p\tq\teven\todd\th"]
    lines.extend(f"{r.p}\t{r.q}\t{r.dim_even}\t{r.dim_odd}\t{r.h}" for r in rows)
    lines.append(f"modes: {', '.join(report.modes) or 'none'}")
    return CommandResult.ok("Hodge table computed.", report.model_dump(), "\n".join(lines))


@efunction_commands.command(
    "variance", help="Exponent variance and the check Var = c_hat * chi / 12.", arguments=[POLY_ARGUMENT, GROUP_ARGUMENT]
)
def variance(args) -> CommandResult:
    logger.info(f"variance called for: {args.poly} with group {args.group}")
    f, G = load_pair(args)
    modes = group_viewmodel.mode_of(G)
    table = basis_viewmodel.hodge_table(f, G)
    var = qexp_viewmodel.variance(table, modes)
    mean = qexp_viewmodel.mean_exponent_defect(table, modes)
    chi = qexp_viewmodel.chi(qexp_viewmodel.e_to_hodge(table, MODE_G0))
    c_hat = qexp_viewmodel.c_hat(f)
    expected = c_hat * chi / 12
    report = VarianceReport(
        polynomial=f.to_text(),
        group=G.describe(),
        variance=str(var),
        mean_defect=str(mean),
        c_hat=str(c_hat),
        chi=chi,
        expected=str(expected),
        corollary_ok=var == expected and mean == 0,
        exponents=[str(x) for x in qexp_viewmodel.exponents(table, modes)],
    )
    text = "\n".join([
        f"Var: {report.variance}",
        f"c_hat: {report.c_hat}",
        f"chi: {report.chi}",
        f"c_hat*chi/12: {report.expected}",
        f"mean defect: {report.mean_defect}",
        f"exponents: {' '.join(report.exponents)}",
        "corollary: " + ("PASS" if report.corollary_ok else "FAIL"),
    ])
    if not report.corollary_ok:
        return CommandResult.fail(EXIT_VERIFICATION, "Variance corollary failed.", data=report.model_dump(), text=text)
    return CommandResult.ok("Variance computed.", report.model_dump(), text)


@efunction_commands.command(
    "pairs", help="Pair table (g, g~, m) and the E-function assembled from it.", arguments=[POLY_ARGUMENT, GROUP_ARGUMENT]
)
def pairs(args) -> CommandResult:
    logger.info(f"pairs called for: {args.poly} with group {args.group}")
    f, G = load_pair(args)
    ft = poly_viewmodel.transpose(f)
    Gt = group_viewmodel.dual_group(f, G)
    table = basis_viewmodel.pair_table(f, G)
    dual_table = basis_viewmodel.pair_table(ft, Gt)
    report = PairsReport(
        polynomial=f.to_text(),
        group=G.describe(),
        transpose=ft.to_text(),
        dual_group=Gt.describe(),
        rows=[{"g": r.g.to_text(), "gdual": r.gdual.to_text(), "m_hat": r.m_hat} for r in table.rows],
        symmetric=dual_table.as_dict() == table.transposed(),
        sign_law=basis_viewmodel.pair_sign_law(table),
        efunction=qexp_viewmodel.to_pretty(basis_viewmodel.efunction_pairs(f, G)),
    )
    lines = ["g\tg~\tm"]
    lines.extend(f"{r['g']}\t{r['gdual']}\t{r['m_hat']}" for r in report.rows)
    lines.append(f"transpose symmetry: {'PASS' if report.symmetric else 'FAIL'}")
    lines.append(f"sign law: {'PASS' if report.sign_law else 'FAIL'}")
    lines.append(f"E from pairs: {report.efunction}")
    if not (report.symmetric and report.sign_law):
        return CommandResult.fail(EXIT_VERIFICATION, "Pair table checks failed.", data=report.model_dump(), text="\n".join(lines))
    return CommandResult.ok("Pair table computed.", report.model_dump(), "\n".join(lines))
