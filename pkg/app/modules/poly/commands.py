import logging

from app.core.utils import CommandGroup, CommandResult
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.models import InfoReport
from app.modules.poly.viewmodel import poly_viewmodel

logger = logging.getLogger("bhmirror.modules.poly")

poly_commands = CommandGroup("poly")

POLY_ARGUMENT = (("poly",), {"help": 'invertible polynomial, e.g. "x^3*y + y^2"'})


@poly_commands.command("info", help="Exponent matrix, atoms, weights and basic invariants.", arguments=[POLY_ARGUMENT])
def info(args) -> CommandResult:
    logger.info(f"info called for: {args.poly}")
    parsed = poly_viewmodel.parse_polynomial(args.poly)
    f = parsed.polynomial
    ws = poly_viewmodel.weights(f)
    atoms = poly_viewmodel.decompose(f)
    report = InfoReport(
        polynomial=f.to_text(),
        n=f.n,
        E=[list(row) for row in f.E],
        det=poly_viewmodel.det(f),
        atoms=[atom.label() for atom in atoms],
        q=[str(x) for x in ws.q],
        weights=list(ws.w),
        degree=ws.d,
        milnor_number=poly_viewmodel.milnor_number(f),
        group_order=poly_viewmodel.det(f),
        grading_operator=group_viewmodel.grading_operator(f).to_text(),
        c_hat=str(poly_viewmodel.c_hat(f)),
        transpose=poly_viewmodel.transpose(f).to_text(),
        warnings=parsed.warnings,
        atom_details=[
            {"kind": atom.kind.value, "vars": [f.vars[i] for i in atom.var_indices], "a": list(atom.a)}
            for atom in atoms
        ],
    )
    lines = [
        f"polynomial: {report.polynomial}",
        f"n: {report.n}",
        f"E: {report.E}",
        f"det E: {report.det}",
        f"atoms: {', '.join(report.atoms)}",
        f"q: {', '.join(report.q)}",
        f"weights: {report.weights} / {report.degree}",
        f"mu: {report.milnor_number}",
        f"|G_f|: {report.group_order}",
        f"g0: {report.grading_operator}",
        f"c_hat: {report.c_hat}",
        f"transpose: {report.transpose}",
    ]
    lines.extend(f"warning: {w}" for w in report.warnings)
    return CommandResult.ok("Polynomial info computed.", report.model_dump(), "\n".join(lines))
