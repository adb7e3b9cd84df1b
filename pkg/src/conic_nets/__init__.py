"""Exact projective geometry of quadrilateral nets with touching inscribed conics."""

from .conics import Conic, ConfocalFamily, classify, conic_tangent_to_five_lines, double_contact
from .errors import GeometryError
from .grids import ChainSpec, LineGrid, common_tangent_conic, grid_from_chains, six_line_report, strip_conics
from .inscribed import Quadrilateral, family_member, inscribed_through, involution, normalize, second_tangent_conic
from .nets import QNet, QuadLoop, koenigs_check, loop_monodromy, porism_check, propagate_touching
from .projective import ProjLine, ProjPoint, cross_ratio, join, meet
from .scalar import tolerance

__all__ = [
    "ChainSpec",
    "ConfocalFamily",
    "Conic",
    "GeometryError",
    "LineGrid",
    "ProjLine",
    "ProjPoint",
    "QNet",
    "QuadLoop",
    "Quadrilateral",
    "classify",
    "common_tangent_conic",
    "conic_tangent_to_five_lines",
    "cross_ratio",
    "double_contact",
    "family_member",
    "grid_from_chains",
    "inscribed_through",
    "involution",
    "join",
    "koenigs_check",
    "loop_monodromy",
    "meet",
    "normalize",
    "porism_check",
    "propagate_touching",
    "second_tangent_conic",
    "six_line_report",
    "strip_conics",
    "tolerance",
]
