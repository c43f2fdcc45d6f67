from fractions import Fraction
from typing import Tuple

from pydantic import BaseModel, ConfigDict


class CharSeriesTerm(BaseModel):
    """coeff * lambda^char * y^y_exp, y = tb/t."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    y_exp: Fraction
    char: Tuple[int, ...]
    coeff: int
