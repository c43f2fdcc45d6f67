import logging
from typing import Tuple

from app.core.utils import CommandGroup, CommandResult
from app.modules.group.models import AbelianSubgroup, DualReport, GroupReport
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import poly_viewmodel

logger = logging.getLogger("bhmirror.modules.group")

group_commands = CommandGroup("group")

POLY_ARGUMENT = (("poly",), {"help": "invertible polynomial"})
GROUP_ARGUMENT = (
    ("--group",),
    {"default": "trivial", "help": 'generators "1/4(1,1)" or one of trivial, Gf, G0, SL (default: trivial)'},
)


def load_pair(args) -> Tuple[InvertiblePolynomial, AbelianSubgroup]:
    f = poly_viewmodel.polynomial(args.poly)
    G = group_viewmodel.parse_group(f, args.group)
    logger.debug(f"Loaded ({f}, <{G.describe()}>), |G| = {G.order}")
    return f, G


def group_report(G: AbelianSubgroup, with_elements: bool = True) -> GroupReport:
    return GroupReport(
        polynomial=G.ambient.to_text(),
        generators=[g.to_text() for g in G.gens],
        order=G.order,
        elements=[g.to_text() for g in G.elements] if with_elements else None,
    )


@group_commands.command("dual", help="Transpose polynomial and dual group.", arguments=[POLY_ARGUMENT, GROUP_ARGUMENT])
def dual(args) -> CommandResult:
    logger.info(f"dual called for: {args.poly} with group {args.group}")
    f, G = load_pair(args)
    ft = poly_viewmodel.transpose(f)
    Gt = group_viewmodel.dual_group(f, G)
    det = poly_viewmodel.det(f)
    report = DualReport(
        polynomial=f.to_text(),
        group=group_report(G),
        transpose=ft.to_text(),
        dual_group=group_report(Gt),
        det=det,
        order_product_ok=G.order * Gt.order == det,
        double_dual_ok=group_viewmodel.dual_group(ft, Gt).same_elements(G),
    )
    text = "\n".join([
        f"f: {report.polynomial}",
        f"G: <{G.describe()}>, order {G.order}",
        f"f~: {report.transpose}",
        f"G~: <{Gt.describe()}>, order {Gt.order}",
        f"|G|*|G~| = det E: {'PASS' if report.order_product_ok else 'FAIL'}",
        f"double dual: {'PASS' if report.double_dual_ok else 'FAIL'}",
    ])
    return CommandResult.ok("Dual group computed.", report.model_dump(), text)
