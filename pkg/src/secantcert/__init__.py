"""Exact certificates for secant varieties of Segre and Segre-Veronese embeddings,
the determinantal curves they define, and the Barth monads behind them."""

from .errors import ContractError, DegenerateError, PreconditionError, ShapeError
from .exactalg import GF, QQ, Matrix, determinant, pfaffian, rank
from .forms import TernaryForm
from .secant import VarietySpec, terracini_dimension
from .tensor import DecompSample, SymTensor3, Tensor3

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "DecompSample",
    "DegenerateError",
    "GF",
    "Matrix",
    "PreconditionError",
    "QQ",
    "ShapeError",
    "SymTensor3",
    "Tensor3",
    "TernaryForm",
    "VarietySpec",
    "determinant",
    "pfaffian",
    "rank",
    "terracini_dimension",
]
