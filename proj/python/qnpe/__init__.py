"""Python bindings for the QNPE solver library."""

from ._qnpe import (
    Objective,
    QnpeError,
    conjugate_residual,
    ext_evec,
    lanczos_iterations,
    make_logistic,
    make_quadratic,
    problem,
    quadratic,
    secant_loss,
    secant_loss_gradient,
    solve,
    verify,
)

__all__ = [
    "Objective",
    "QnpeError",
    "conjugate_residual",
    "ext_evec",
    "lanczos_iterations",
    "make_logistic",
    "make_quadratic",
    "problem",
    "quadratic",
    "secant_loss",
    "secant_loss_gradient",
    "solve",
    "verify",
]
