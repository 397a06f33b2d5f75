"""Built-in target functions and a small safe expression parser."""

from __future__ import annotations

import ast
import math

import numpy as np

from .operators import Lipschitz, TargetFunction

FD_STEP = 1e-5

_E = math.e


def _fig6():
    return TargetFunction(
        lambda x: 1 - np.cos(4 * np.exp(x)),
        d1=lambda x: 4 * np.exp(x) * np.sin(4 * np.exp(x)),
        d2=lambda x: 4 * np.exp(x) * np.sin(4 * np.exp(x)) + 16 * np.exp(2 * x) * np.cos(4 * np.exp(x)),
        lipschitz=Lipschitz(4 * _E, 1.0),
        name="1-cos(4*exp(x))",
    )


_BUILTINS = {
    "fig6": _fig6,
    "one": lambda: TargetFunction(
        lambda x: np.ones_like(x), d1=lambda x: np.zeros_like(x), d2=lambda x: np.zeros_like(x), name="1"
    ),
    "x": lambda: TargetFunction(
        lambda x: x,
        d1=lambda x: np.ones_like(x),
        d2=lambda x: np.zeros_like(x),
        lipschitz=Lipschitz(1.0, 1.0),
        name="x",
    ),
    "x2": lambda: TargetFunction(
        lambda x: x**2, d1=lambda x: 2 * x, d2=lambda x: np.full_like(x, 2.0), lipschitz=Lipschitz(2.0, 1.0), name="x**2"
    ),
    "x3": lambda: TargetFunction(
        lambda x: x**3, d1=lambda x: 3 * x**2, d2=lambda x: 6 * x, lipschitz=Lipschitz(3.0, 1.0), name="x**3"
    ),
    "exp": lambda: TargetFunction(np.exp, d1=np.exp, d2=np.exp, lipschitz=Lipschitz(_E, 1.0), name="exp(x)"),
    "sin3x": lambda: TargetFunction(
        lambda x: np.sin(3 * x),
        d1=lambda x: 3 * np.cos(3 * x),
        d2=lambda x: -9 * np.sin(3 * x),
        lipschitz=Lipschitz(3.0, 1.0),
        name="sin(3*x)",
    ),
    "abs-half": lambda: TargetFunction(lambda x: np.abs(x - 0.5), lipschitz=Lipschitz(1.0, 1.0), name="abs(x-0.5)"),
    "sqrt-abs-half": lambda: TargetFunction(
        lambda x: np.sqrt(np.abs(x - 0.5)), lipschitz=Lipschitz(1.0, 0.5), name="sqrt(abs(x-0.5))"
    ),
}

# normalised expression text -> built-in name
_ALIASES = {
    "1-cos(4*exp(x))": "fig6",
    "1-cos(4*e**x)": "fig6",
    "1": "one",
    "x**2": "x2",
    "x**3": "x3",
    "exp(x)": "exp",
    "e**x": "exp",
    "sin(3*x)": "sin3x",
    "abs(x-0.5)": "abs-half",
    "abs(x-1/2)": "abs-half",
    "sqrt(abs(x-0.5))": "sqrt-abs-half",
    "abs(x-0.5)**0.5": "sqrt-abs-half",
}

_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
    "pow": np.power,
    "sqrt": np.sqrt,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_ALLOWED_OPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


class FunctionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin(name: str) -> TargetFunction:
    return _BUILTINS[name]()


def _normalise(expr: str) -> str:
    return "".join(expr.split()).replace("^", "**")


def _validate(node: ast.AST):
    for sub in ast.walk(node):
        pos = getattr(sub, "col_offset", 0)
        if isinstance(sub, (ast.Expression, ast.Load)) or isinstance(sub, _ALLOWED_OPS):
            continue
        if isinstance(sub, (ast.BinOp, ast.UnaryOp)):
            if not isinstance(sub.op, _ALLOWED_OPS):
                raise FunctionSyntaxError(f"operator {type(sub.op).__name__} not allowed", pos)
            continue
        if isinstance(sub, ast.Constant):
            if not isinstance(sub.value, (int, float)) or isinstance(sub.value, bool):
                raise FunctionSyntaxError(f"constant {sub.value!r} not allowed", pos)
            continue
        if isinstance(sub, ast.Name):
            if sub.id != "x" and sub.id not in _FUNCS and sub.id not in _CONSTS:
                raise FunctionSyntaxError(f"unknown name {sub.id!r}", pos)
            continue
        if isinstance(sub, ast.Call):
            if not isinstance(sub.func, ast.Name) or sub.func.id not in _FUNCS:
                raise FunctionSyntaxError("only sin, cos, exp, abs, pow, sqrt may be called", pos)
            if sub.keywords:
                raise FunctionSyntaxError("keyword arguments not allowed", pos)
            continue
        raise FunctionSyntaxError(f"{type(sub).__name__} not allowed", pos)


def _compile(expr: str):
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise FunctionSyntaxError(exc.msg or "invalid syntax", max((exc.offset or 1) - 1, 0)) from None
    _validate(tree)
    code = compile(tree, "<function>", "eval")

    def fn(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return eval(code, {"__builtins__": {}}, {**_FUNCS, **_CONSTS, "x": x})

    return fn


def parse_function(expr: str) -> TargetFunction:
    """Built-in name, or an arithmetic expression in x.

    Built-ins carry exact derivatives and Lipschitz data. Parsed expressions
    get central-difference derivatives and are flagged approximate.
    """
    text = expr.strip()
    if text in _BUILTINS:
        return builtin(text)
    alias = _ALIASES.get(_normalise(text))
    if alias is not None:
        return builtin(alias)
    fn = _compile(text)
    h = FD_STEP
    return TargetFunction(
        fn,
        d1=lambda x: (fn(x + h) - fn(x - h)) / (2 * h),
        d2=lambda x: (fn(x + h) - 2 * fn(x) + fn(x - h)) / (h * h),
        name=text,
        approximate_derivatives=True,
    )
